#pragma once

// Scan kernels over element samples: pair distance tables, map displacement
// maxima, and axiom sweeps. Each kernel has a serial reference implementation
// and an OpenMP variant whose merges are deterministic (plain maxima, and
// witnesses resolved by minimal scan rank), so both always agree. The
// unqualified name dispatches to the parallel variant when OpenMP is enabled.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgc/groups.hpp"
#include "cgc/norms.hpp"

namespace cgc {

using ElementMap = std::function<Element(const Element&)>;

// Distances for every unordered sample pair. Row t corresponds to the pair
// (i, j) with i < j in lexicographic order; `dom` is the distance of the two
// sample points and `cod` the distance of their images under the map.
struct PairDistances {
  std::vector<std::pair<Rat, Rat>> rows;
};

PairDistances pair_distances_serial(const std::vector<Element>& sample,
                                    const ElementMap& f, const Metric& dom,
                                    const Metric& cod);
PairDistances pair_distances_parallel(const std::vector<Element>& sample,
                                      const ElementMap& f, const Metric& dom,
                                      const Metric& cod);
PairDistances pair_distances(const std::vector<Element>& sample,
                             const ElementMap& f, const Metric& dom,
                             const Metric& cod);

// For each grid entry d, the largest image distance over pairs whose domain
// distance is at most d. Ascending grids therefore give monotone tables.
std::vector<std::pair<Rat, Rat>> control_table(const PairDistances& dists,
                                               const std::vector<Rat>& grid);

// max over the sample of m.distance(u(x), v(x)).
Rat max_map_distance_serial(const std::vector<Element>& sample,
                            const ElementMap& u, const ElementMap& v,
                            const Metric& m);
Rat max_map_distance_parallel(const std::vector<Element>& sample,
                              const ElementMap& u, const ElementMap& v,
                              const Metric& m);
Rat max_map_distance(const std::vector<Element>& sample, const ElementMap& u,
                     const ElementMap& v, const Metric& m);

struct AxiomWitness {
  std::string axiom;
  std::size_t i = 0;
  std::size_t j = 0;  // equals i for the single-element checks
};

struct AxiomScan {
  long violations = 0;
  std::optional<AxiomWitness> first;  // earliest in scan order
  bool ok() const { return violations == 0; }
};

// Checks, over the sample: the norm vanishes exactly at the identity, is
// preserved by negation, and is subadditive on every pair. Properness is not
// a per-element property and is certified separately by ball enumeration.
AxiomScan norm_axioms_serial(const Metric& m, const std::vector<Element>& sample);
AxiomScan norm_axioms_parallel(const Metric& m,
                               const std::vector<Element>& sample);
AxiomScan norm_axioms(const Metric& m, const std::vector<Element>& sample);

// Checks d(x, z) <= max(d(x, y), d(y, z)) for all sample triples, using a
// precomputed distance matrix.
AxiomScan strong_triangle_serial(const Metric& m,
                                 const std::vector<Element>& sample);
AxiomScan strong_triangle_parallel(const Metric& m,
                                   const std::vector<Element>& sample);
AxiomScan strong_triangle(const Metric& m, const std::vector<Element>& sample);

}  // namespace cgc
