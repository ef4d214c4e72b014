#include "cgc/sweep.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cgc {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

// Keeps the lowest-rank witness so the parallel merge is order-independent.
struct WitnessTracker {
  long count = 0;
  long long best_rank = -1;
  AxiomWitness best;

  void record(long long rank, const char* axiom, std::size_t i, std::size_t j) {
    ++count;
    if (best_rank < 0 || rank < best_rank) {
      best_rank = rank;
      best = AxiomWitness{axiom, i, j};
    }
  }
  void merge(const WitnessTracker& other) {
    count += other.count;
    if (other.best_rank >= 0 &&
        (best_rank < 0 || other.best_rank < best_rank)) {
      best_rank = other.best_rank;
      best = other.best;
    }
  }
  AxiomScan finish() const {
    AxiomScan s;
    s.violations = count;
    if (best_rank >= 0) s.first = best;
    return s;
  }
};

void scan_element_axioms(const Metric& m, const std::vector<Element>& sample,
                         std::size_t i, WitnessTracker& t) {
  const Element& x = sample[i];
  Rat nx = m.norm(x);
  bool is_id = is_identity(m.group, x);
  if ((nx == 0) != is_id)
    t.record(static_cast<long long>(i) * 2, "zero exactly at the identity", i, i);
  if (m.norm(negate(m.group, x)) != nx)
    t.record(static_cast<long long>(i) * 2 + 1, "negation preserves the norm", i,
             i);
}

void scan_pair_axiom(const Metric& m, const std::vector<Element>& sample,
                     std::size_t i, std::size_t j, std::size_t n,
                     WitnessTracker& t) {
  Rat lhs = m.norm(add(m.group, sample[i], sample[j]));
  if (lhs > m.norm(sample[i]) + m.norm(sample[j]))
    t.record(2ll * n + static_cast<long long>(i) * n + j, "subadditive on pairs",
             i, j);
}

std::vector<Rat> distance_matrix(const Metric& m,
                                 const std::vector<Element>& sample,
                                 bool parallel) {
  std::size_t n = sample.size();
  std::vector<Rat> d(n * n);
  auto pairs = unordered_pairs(n);
  long total = static_cast<long>(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long t = 0; t < total; ++t) {
    auto [i, j] = pairs[static_cast<std::size_t>(t)];
    Rat v = m.distance(sample[i], sample[j]);
    d[i * n + j] = v;
    d[j * n + i] = std::move(v);
  }
  (void)parallel;
  return d;
}

AxiomScan triangle_scan(const Metric& m, const std::vector<Element>& sample,
                        bool parallel) {
  std::size_t n = sample.size();
  std::vector<Rat> d = distance_matrix(m, sample, parallel);
  auto at = [&](std::size_t a, std::size_t b) -> const Rat& {
    return d[a * n + b];
  };
  WitnessTracker total;
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    WitnessTracker local;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
    for (long li = 0; li < static_cast<long>(n); ++li) {
      auto i = static_cast<std::size_t>(li);
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          long long base =
              ((static_cast<long long>(i) * n + j) * static_cast<long long>(n) +
               k) *
              3;
          if (at(i, k) > std::max(at(i, j), at(j, k)))
            local.record(base, "strong triangle inequality", i, k);
          if (at(i, j) > std::max(at(i, k), at(k, j)))
            local.record(base + 1, "strong triangle inequality", i, j);
          if (at(j, k) > std::max(at(j, i), at(i, k)))
            local.record(base + 2, "strong triangle inequality", j, k);
        }
    }
#ifdef _OPENMP
#pragma omp critical(cgc_sweep_triangle)
#endif
    total.merge(local);
  }
  (void)parallel;
  return total.finish();
}

AxiomScan axiom_scan(const Metric& m, const std::vector<Element>& sample,
                     bool parallel) {
  std::size_t n = sample.size();
  auto pairs = unordered_pairs(n);
  WitnessTracker total;
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    WitnessTracker local;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
    for (long li = 0; li < static_cast<long>(n); ++li)
      scan_element_axioms(m, sample, static_cast<std::size_t>(li), local);
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
    for (long t = 0; t < static_cast<long>(pairs.size()); ++t) {
      auto [i, j] = pairs[static_cast<std::size_t>(t)];
      scan_pair_axiom(m, sample, i, j, n, local);
    }
#ifdef _OPENMP
#pragma omp critical(cgc_sweep_axioms)
#endif
    total.merge(local);
  }
  (void)parallel;
  return total.finish();
}

PairDistances pair_table(const std::vector<Element>& sample,
                         const ElementMap& f, const Metric& dom,
                         const Metric& cod, bool parallel) {
  std::size_t n = sample.size();
  std::vector<Element> images(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long i = 0; i < static_cast<long>(n); ++i)
    images[static_cast<std::size_t>(i)] = f(sample[static_cast<std::size_t>(i)]);

  auto pairs = unordered_pairs(n);
  PairDistances out;
  out.rows.resize(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long t = 0; t < static_cast<long>(pairs.size()); ++t) {
    auto [i, j] = pairs[static_cast<std::size_t>(t)];
    out.rows[static_cast<std::size_t>(t)] = {
        dom.distance(sample[i], sample[j]), cod.distance(images[i], images[j])};
  }
  (void)parallel;
  return out;
}

Rat map_distance_max(const std::vector<Element>& sample, const ElementMap& u,
                     const ElementMap& v, const Metric& m, bool parallel) {
  Rat best = 0;
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    Rat local = 0;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
    for (long i = 0; i < static_cast<long>(sample.size()); ++i) {
      const Element& x = sample[static_cast<std::size_t>(i)];
      Rat dist = m.distance(u(x), v(x));
      if (dist > local) local = std::move(dist);
    }
#ifdef _OPENMP
#pragma omp critical(cgc_sweep_displacement)
#endif
    if (local > best) best = std::move(local);
  }
  (void)parallel;
  return best;
}

}  // namespace

PairDistances pair_distances_serial(const std::vector<Element>& sample,
                                    const ElementMap& f, const Metric& dom,
                                    const Metric& cod) {
  return pair_table(sample, f, dom, cod, false);
}

PairDistances pair_distances_parallel(const std::vector<Element>& sample,
                                      const ElementMap& f, const Metric& dom,
                                      const Metric& cod) {
  return pair_table(sample, f, dom, cod, true);
}

PairDistances pair_distances(const std::vector<Element>& sample,
                             const ElementMap& f, const Metric& dom,
                             const Metric& cod) {
#ifdef _OPENMP
  return pair_distances_parallel(sample, f, dom, cod);
#else
  return pair_distances_serial(sample, f, dom, cod);
#endif
}

std::vector<std::pair<Rat, Rat>> control_table(const PairDistances& dists,
                                               const std::vector<Rat>& grid) {
  std::vector<std::pair<Rat, Rat>> out;
  out.reserve(grid.size());
  for (const Rat& g : grid) {
    Rat eps = 0;
    for (const auto& [dd, cd] : dists.rows)
      if (dd <= g && cd > eps) eps = cd;
    out.emplace_back(g, std::move(eps));
  }
  return out;
}

Rat max_map_distance_serial(const std::vector<Element>& sample,
                            const ElementMap& u, const ElementMap& v,
                            const Metric& m) {
  return map_distance_max(sample, u, v, m, false);
}

Rat max_map_distance_parallel(const std::vector<Element>& sample,
                              const ElementMap& u, const ElementMap& v,
                              const Metric& m) {
  return map_distance_max(sample, u, v, m, true);
}

Rat max_map_distance(const std::vector<Element>& sample, const ElementMap& u,
                     const ElementMap& v, const Metric& m) {
#ifdef _OPENMP
  return max_map_distance_parallel(sample, u, v, m);
#else
  return max_map_distance_serial(sample, u, v, m);
#endif
}

AxiomScan norm_axioms_serial(const Metric& m,
                             const std::vector<Element>& sample) {
  return axiom_scan(m, sample, false);
}

AxiomScan norm_axioms_parallel(const Metric& m,
                               const std::vector<Element>& sample) {
  return axiom_scan(m, sample, true);
}

AxiomScan norm_axioms(const Metric& m, const std::vector<Element>& sample) {
#ifdef _OPENMP
  return norm_axioms_parallel(m, sample);
#else
  return norm_axioms_serial(m, sample);
#endif
}

AxiomScan strong_triangle_serial(const Metric& m,
                                 const std::vector<Element>& sample) {
  return triangle_scan(m, sample, false);
}

AxiomScan strong_triangle_parallel(const Metric& m,
                                   const std::vector<Element>& sample) {
  return triangle_scan(m, sample, true);
}

AxiomScan strong_triangle(const Metric& m, const std::vector<Element>& sample) {
#ifdef _OPENMP
  return strong_triangle_parallel(m, sample);
#else
  return strong_triangle_serial(m, sample);
#endif
}

}  // namespace cgc
