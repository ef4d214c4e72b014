#pragma once

// Empirical certification on finite samples: control functions and
// displacement maxima for candidate coarse maps, scale components, growth
// tables with type comparison, and the invariant-based classifier.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgc/groups.hpp"
#include "cgc/norms.hpp"
#include "cgc/sweep.hpp"

namespace cgc {

struct ControlRow {
  Rat delta;
  Rat eps_max;
  std::optional<Rat> predicted;
  bool pass = true;  // eps_max <= predicted when a prediction is present
};

struct ControlCertificate {
  std::string sample_spec;  // where the sample came from, for reproducibility
  std::vector<ControlRow> rows;
  std::optional<Rat> k1;  // max d(g(f(x)), x) when an inverse candidate is given
  std::optional<Rat> k2;  // max d(f(g(y)), y) over the sample's image
  bool all_pass() const;
};

// Optional per-delta predicted bound; an empty function means no prediction.
using PredictedBound = std::function<Rat(const Rat&)>;

ControlCertificate control_function(const ElementMap& f, const Metric& dom,
                                    const Metric& cod,
                                    const std::vector<Element>& sample,
                                    const std::vector<Rat>& grid,
                                    const PredictedBound& predicted = {},
                                    std::string sample_spec = {});

// K1 = max d_dom(g(f(x)), x); K2 = max d_cod(f(g(y)), y) with y = f(x).
std::pair<Rat, Rat> displacement(const ElementMap& f, const ElementMap& g_inv,
                                 const std::vector<Element>& sample,
                                 const Metric& dom, const Metric& cod);

// Breadth-first closure of base inside the truncation under steps of
// distance strictly below s.
std::vector<Element> scale_component(const Metric& m,
                                     const std::vector<Element>& truncation,
                                     const Rat& s, const Element& base);

struct GeneratedSubgroup {
  std::vector<Element> elements;        // closure clipped to the truncation
  bool escaped = false;                 // some sum left the truncation
  std::optional<Element> witness;       // first escaping element found
};

GeneratedSubgroup generated_subgroup(const GroupDescriptor& G,
                                     const std::vector<Element>& gens,
                                     const std::vector<Element>& truncation);

struct GrowthTable {
  GroupDescriptor group;
  std::string metric_name;
  Rat s;
  Element base;
  std::vector<long> counts;  // counts[n] = size of the n-step reachable set
};

// Reachable-set sizes for chains of steps of norm strictly below s, starting
// at the identity. Refuses to report when either the step set or the
// reachable set touches the enumeration boundary at `bound`.
GrowthTable growth(const GroupDescriptor& G, const Metric& m, const Rat& s,
                   long n_max, int bound);

struct GrowthCompareReport {
  bool witnessed = false;
  std::optional<long> c;  // least witnessing constant in the range
  long start = 1;
  std::string label;  // explicitly a finite-data heuristic, not a proof
};

// Searches integer C in [c_lo, c_hi] for counts(n) <= C * candidate(C * n)
// on every tabulated n >= start, reporting the least witness.
GrowthCompareReport growth_compare(const GrowthTable& table,
                                   const std::function<Rat(long)>& candidate,
                                   long c_lo, long c_hi, long start = 1);

enum class Verdict {
  Equivalent,
  NotEquivalent,
  Embeds,
  NoEmbedding,
  Undecided,
};

std::string verdict_text(Verdict v);

struct ClassificationVerdict {
  InvariantRecord left;
  InvariantRecord right;
  Verdict verdict = Verdict::Undecided;
  std::string rule;  // which decision rule produced the verdict
};

// Coarse-equivalence test from the computed invariants alone.
ClassificationVerdict classify(const GroupDescriptor& A,
                               const GroupDescriptor& B);

// Coarse-embedding test for A into B; decided only when B is finitely
// generated and A is not.
ClassificationVerdict embeddable(const GroupDescriptor& A,
                                 const GroupDescriptor& B);

}  // namespace cgc
