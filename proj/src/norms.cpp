#include "cgc/norms.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cgc {

DyadicForm dyadic_form(const Rat& x) {
  Int d = den(x);
  unsigned i = p_adic_valuation(d, 2);
  if (int_pow(2, i) != d)
    throw std::invalid_argument("dyadic_form: denominator is not a power of 2");
  if (i == 0) return {num(x), 0, 0};
  Rat frac = x - rat_trunc(x);
  return {rat_trunc(x), num(frac), i};
}

Int dyadic_norm(const Rat& x) {
  DyadicForm f = dyadic_form(x);
  return f.i == 0 ? int_abs(f.m) : int_abs(f.m) + Int(f.i);
}

int dyadic_delta(const Rat& x, const Rat& y) {
  DyadicForm fx = dyadic_form(x), fy = dyadic_form(y);
  Int msum = fx.m + fy.m;
  Rat fsum = (x - Rat(fx.m)) + (y - Rat(fy.m));
  if ((msum > 0 && fsum < 0) || (msum < 0 && fsum <= -1)) return -1;
  if ((msum >= 0 && fsum >= 0 && fsum < 1) ||
      (msum <= 0 && fsum > -1 && fsum <= 0))
    return 0;
  return 1;
}

unsigned dyadic_pair_depth(const Rat& x, const Rat& y) {
  DyadicForm fx = dyadic_form(x), fy = dyadic_form(y);
  return std::max(fx.k == 0 ? 0u : fx.i, fy.k == 0 ? 0u : fy.i);
}

unsigned prufer_norm(const PruferVal& x) { return x.i; }

// --- word metrics ---------------------------------------------------------

namespace {

bool is_signed_standard_basis(const GroupDescriptor& G,
                              const std::vector<Element>& gens) {
  if (G.kind != GroupKind::IntPower) return false;
  size_t n = static_cast<size_t>(G.rank_n);
  if (n == 0 || gens.size() != 2 * n) return false;
  std::vector<Element> want;
  for (size_t j = 0; j < n; ++j)
    for (int s : {1, -1}) {
      IntVec e;
      e.c.assign(n, 0);
      e.c[j] = s;
      want.push_back(Element{std::move(e)});
    }
  std::vector<Element> have = gens;
  std::sort(want.begin(), want.end(), ElementLess{});
  std::sort(have.begin(), have.end(), ElementLess{});
  return want == have;
}

using DistTable = std::map<Element, long, ElementLess>;

DistTable bfs_table(const GroupDescriptor& G, const std::vector<Element>& gens,
                    long radius_cap) {
  DistTable dist;
  std::vector<Element> frontier{identity(G)};
  dist[frontier.front()] = 0;
  for (long r = 1; r <= radius_cap && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Element y = add(G, x, g);
        if (dist.emplace(y, r).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace

Metric word_metric(const GroupDescriptor& G, std::vector<Element> gens,
                   long radius_cap) {
  if (gens.empty())
    throw std::invalid_argument("word_metric: empty generating list");
  if (radius_cap < 1)
    throw std::invalid_argument("word_metric: radius cap must be positive");
  for (const auto& g : gens) {
    if (!belongs(G, g))
      throw std::invalid_argument("word_metric: generator outside the group");
    if (std::find(gens.begin(), gens.end(), negate(G, g)) == gens.end())
      throw std::invalid_argument(
          "word_metric: generating list must be symmetric (closed under "
          "negation)");
  }
  Metric m;
  m.group = G;
  m.name = "word";
  if (is_signed_standard_basis(G, gens)) {
    m.norm = [](const Element& x) {
      Rat total = 0;
      for (const Int& c : x.as<IntVec>().c) total += Rat(int_abs(c));
      return total;
    };
    return m;
  }
  auto table = std::make_shared<const DistTable>(bfs_table(G, gens, radius_cap));
  auto cap = radius_cap;
  m.norm = [table, cap](const Element& x) {
    auto it = table->find(x);
    if (it == table->end())
      throw std::runtime_error(
          "word norm: element beyond the search radius " +
          std::to_string(cap) + "; the list may not generate at this scale");
    return Rat(it->second);
  };
  return m;
}

Metric dyadic_metric() {
  Metric m;
  m.group = GroupDescriptor::localized(2);
  m.name = "dyadic";
  m.norm = [](const Element& x) { return Rat(dyadic_norm(x.as<Rational>().v)); };
  return m;
}

Metric prufer_metric(const Int& p, ScaleRule scale) {
  if (!scale.strictly_increasing() || scale.at(1) <= 0)
    throw std::invalid_argument(
        "prufer_metric: scale sequence must be positive and strictly "
        "increasing");
  Metric m;
  m.group = GroupDescriptor::prufer(p);
  m.name = "prufer(" + p.str() + ")";
  m.norm = [scale](const Element& x) {
    unsigned i = prufer_norm(x.as<PruferVal>());
    return i == 0 ? Rat(0) : scale.at(i);
  };
  return m;
}

Metric chain_metric(std::shared_ptr<const OneStepChain> chain) {
  if (!chain) throw std::invalid_argument("chain_metric: null chain");
  Metric m;
  m.group = chain->base;
  m.name = "chain-ultra";
  m.norm = [chain](const Element& x) {
    long L = chain->level_of(x);
    return L == 0 ? Rat(0) : chain->scale_at(L);
  };
  return m;
}

Metric sum_metric(std::vector<Metric> parts) {
  if (parts.size() < 2)
    throw std::invalid_argument("sum_metric: need at least two parts");
  std::vector<GroupDescriptor> groups;
  std::string name = "sum(";
  for (size_t j = 0; j < parts.size(); ++j) {
    if (parts[j].group.kind == GroupKind::DirectSum)
      throw std::invalid_argument(
          "sum_metric: parts may not themselves be direct sums");
    groups.push_back(parts[j].group);
    name += (j ? ", " : "") + parts[j].name;
  }
  Metric m;
  m.group = GroupDescriptor::direct_sum(groups);
  m.name = name + ")";
  auto shared = std::make_shared<const std::vector<Metric>>(std::move(parts));
  m.norm = [shared](const Element& x) {
    const auto& t = x.as<Tuple>();
    if (t.size() != shared->size())
      throw std::invalid_argument("sum_metric: tuple arity mismatch");
    Rat total = 0;
    for (size_t j = 0; j < t.size(); ++j) total += (*shared)[j].norm(t[j]);
    return total;
  };
  return m;
}

}  // namespace cgc
