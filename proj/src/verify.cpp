#include "cgc/verify.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace cgc {

bool ControlCertificate::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ControlRow& r) { return r.pass; });
}

ControlCertificate control_function(const ElementMap& f, const Metric& dom,
                                    const Metric& cod,
                                    const std::vector<Element>& sample,
                                    const std::vector<Rat>& grid,
                                    const PredictedBound& predicted,
                                    std::string sample_spec) {
  if (sample.empty())
    throw std::invalid_argument("control_function: empty sample");
  PairDistances dists = pair_distances(sample, f, dom, cod);
  ControlCertificate cert;
  cert.sample_spec = std::move(sample_spec);
  for (auto& [delta, eps] : control_table(dists, grid)) {
    ControlRow row;
    row.delta = std::move(delta);
    row.eps_max = std::move(eps);
    if (predicted) {
      row.predicted = predicted(row.delta);
      row.pass = row.eps_max <= *row.predicted;
    }
    cert.rows.push_back(std::move(row));
  }
  return cert;
}

std::pair<Rat, Rat> displacement(const ElementMap& f, const ElementMap& g_inv,
                                 const std::vector<Element>& sample,
                                 const Metric& dom, const Metric& cod) {
  if (sample.empty()) throw std::invalid_argument("displacement: empty sample");
  auto ident = [](const Element& x) { return x; };
  Rat k1 = max_map_distance(
      sample, [&](const Element& x) { return g_inv(f(x)); }, ident, dom);
  Rat k2 = max_map_distance(
      sample, [&](const Element& x) { return f(g_inv(f(x))); },
      [&](const Element& x) { return f(x); }, cod);
  return {std::move(k1), std::move(k2)};
}

std::vector<Element> scale_component(const Metric& m,
                                     const std::vector<Element>& truncation,
                                     const Rat& s, const Element& base) {
  std::set<Element, ElementLess> pool(truncation.begin(), truncation.end());
  if (pool.find(base) == pool.end())
    throw std::invalid_argument(
        "scale_component: the base point is outside the truncation");
  std::set<Element, ElementLess> seen{base};
  std::deque<Element> queue{base};
  while (!queue.empty()) {
    Element cur = std::move(queue.front());
    queue.pop_front();
    for (const Element& t : pool) {
      if (seen.count(t)) continue;
      if (m.distance(cur, t) < s) {
        seen.insert(t);
        queue.push_back(t);
      }
    }
  }
  return std::vector<Element>(seen.begin(), seen.end());
}

GeneratedSubgroup generated_subgroup(const GroupDescriptor& G,
                                     const std::vector<Element>& gens,
                                     const std::vector<Element>& truncation) {
  std::set<Element, ElementLess> pool(truncation.begin(), truncation.end());
  GeneratedSubgroup out;
  std::set<Element, ElementLess> seen;
  std::deque<Element> queue;
  auto offer = [&](Element e) {
    if (seen.count(e)) return;
    if (pool.find(e) == pool.end()) {
      if (!out.escaped) {
        out.escaped = true;
        out.witness = std::move(e);
      }
      return;
    }
    seen.insert(e);
    queue.push_back(std::move(e));
  };
  offer(identity(G));
  for (const Element& g : gens) offer(g);
  while (!queue.empty()) {
    Element cur = std::move(queue.front());
    queue.pop_front();
    offer(negate(G, cur));
    for (const Element& g : gens) offer(add(G, cur, g));
  }
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

GrowthTable growth(const GroupDescriptor& G, const Metric& m, const Rat& s,
                   long n_max, int bound) {
  if (n_max < 0) throw std::invalid_argument("growth: n_max must be >= 0");
  if (bound < 1) throw std::invalid_argument("growth: bound must be >= 1");
  std::vector<Element> outer = enumerate_ball(G, bound + 1);
  std::vector<Element> trunc = enumerate_ball(G, bound);
  std::vector<Element> inner = enumerate_ball(G, bound - 1);
  std::set<Element, ElementLess> trunc_set(trunc.begin(), trunc.end());
  std::set<Element, ElementLess> inner_set(inner.begin(), inner.end());

  std::vector<Element> steps;
  for (const Element& a : outer) {
    Rat na = m.norm(a);
    if (na > 0 && na < s) {
      if (trunc_set.find(a) == trunc_set.end())
        throw std::runtime_error(
            "growth: the step set reaches the enumeration boundary; increase "
            "the bound");
      steps.push_back(a);
    }
  }

  GrowthTable table;
  table.group = G;
  table.metric_name = m.name;
  table.s = s;
  table.base = identity(G);
  std::set<Element, ElementLess> reach{table.base};
  table.counts.push_back(1);
  for (long n = 1; n <= n_max; ++n) {
    std::set<Element, ElementLess> next = reach;
    for (const Element& x : reach)
      for (const Element& a : steps) next.insert(add(G, x, a));
    reach = std::move(next);
    for (const Element& x : reach)
      if (inner_set.find(x) == inner_set.end())
        throw std::runtime_error(
            "growth: the reachable set touches the truncation boundary; "
            "increase the bound");
    table.counts.push_back(static_cast<long>(reach.size()));
  }
  return table;
}

GrowthCompareReport growth_compare(const GrowthTable& table,
                                   const std::function<Rat(long)>& candidate,
                                   long c_lo, long c_hi, long start) {
  if (table.counts.empty())
    throw std::invalid_argument("growth_compare: empty table");
  GrowthCompareReport report;
  report.start = start;
  for (long c = std::max<long>(1, c_lo); c <= c_hi; ++c) {
    bool ok = true;
    for (long n = start; n < static_cast<long>(table.counts.size()) && ok; ++n)
      if (Rat(table.counts[static_cast<size_t>(n)]) > Rat(c) * candidate(c * n))
        ok = false;
    if (ok) {
      report.witnessed = true;
      report.c = c;
      break;
    }
  }
  report.label = report.witnessed
                     ? "consistent with the candidate on the tabulated range "
                       "(finite-data heuristic, not a proof)"
                     : "refuted on tabulated range (finite-data heuristic, "
                       "not a proof)";
  return report;
}

std::string verdict_text(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not-equivalent";
    case Verdict::Embeds: return "embeds";
    case Verdict::NoEmbedding: return "no-embedding";
    case Verdict::Undecided: return "undecided-by-implemented-criteria";
  }
  return "undecided-by-implemented-criteria";
}

ClassificationVerdict classify(const GroupDescriptor& A,
                               const GroupDescriptor& B) {
  ClassificationVerdict v;
  v.left = invariants(A);
  v.right = invariants(B);
  if (!v.left.torsion_free_rank || !v.right.torsion_free_rank) {
    v.verdict = Verdict::Undecided;
    v.rule = "undecided-infinite-rank";
    return v;
  }
  bool same = *v.left.torsion_free_rank == *v.right.torsion_free_rank &&
              v.left.finitely_generated == v.right.finitely_generated;
  v.verdict = same ? Verdict::Equivalent : Verdict::NotEquivalent;
  bool both_locally_finite = *v.left.torsion_free_rank == 0 &&
                             *v.right.torsion_free_rank == 0 &&
                             !v.left.finitely_generated &&
                             !v.right.finitely_generated;
  v.rule = both_locally_finite ? "locally-finite-class" : "rank-and-fg-invariants";
  return v;
}

ClassificationVerdict embeddable(const GroupDescriptor& A,
                                 const GroupDescriptor& B) {
  ClassificationVerdict v;
  v.left = invariants(A);
  v.right = invariants(B);
  if (!v.left.torsion_free_rank || !v.right.torsion_free_rank) {
    v.verdict = Verdict::Undecided;
    v.rule = "undecided-infinite-rank";
    return v;
  }
  if (!v.right.finitely_generated || v.left.finitely_generated) {
    v.verdict = Verdict::Undecided;
    v.rule = "undecided-hypothesis-not-met";
    return v;
  }
  v.verdict = *v.left.torsion_free_rank < *v.right.torsion_free_rank
                  ? Verdict::Embeds
                  : Verdict::NoEmbedding;
  v.rule = "rank-embedding-criterion";
  return v;
}

}  // namespace cgc
