#include "cgc/splitting.hpp"

#include <algorithm>
#include <stdexcept>

namespace cgc {

namespace {

// Representative of v mod Z[1/2]: the unique r/d in [0, 1) with d the odd
// part of v's denominator and r = num(v) * inverse(2^s) mod d.
Rat odd_class(const Rat& v) {
  Int dfull = den(v);
  unsigned s = p_adic_valuation(dfull, 2);
  Int d = dfull / int_pow(2, s);
  if (d == 1) return Rat(0);
  Int r = num(v) % d;
  if (r < 0) r += d;
  r = (r * mod_inverse(int_pow(2, s), d)) % d;
  return Rat(r, d);
}

PruferVal prufer2_of(const Rat& frac01) {
  if (frac01 == 0) return PruferVal{0, 0};
  return PruferVal{num(frac01), p_adic_valuation(den(frac01), 2)};
}

}  // namespace

Decomposition decompose(const OddPairSpec& pair, const Element& g) {
  if (!belongs(pair.ambient, g))
    throw std::invalid_argument("decompose: element outside the ambient group");
  long n = pair.quotient_level(g);
  if (n < 0)
    throw std::runtime_error(
        "decompose: quotient class lies outside the materialized chain "
        "(depth " + std::to_string(pair.depth()) + ")");
  Decomposition d;
  Element rest = g;
  for (long lev = n; lev >= 1; --lev) {
    if (pair.quotient_level(rest) < lev) continue;  // this level's r is 0
    const Int& k = pair.half_indexes[static_cast<size_t>(lev - 1)];
    bool hit = false;
    for (Int r = -k; r <= k && !hit; ++r) {
      if (r == 0) continue;
      Element cand = sub(pair.ambient, rest,
                         scalar_mul(pair.ambient, r,
                                    pair.lifts[static_cast<size_t>(lev - 1)]));
      long cl = pair.quotient_level(cand);
      if (cl >= 0 && cl < lev) {
        d.coeffs[lev] = r;
        rest = std::move(cand);
        hit = true;
      }
    }
    if (!hit)
      throw std::logic_error(
          "decompose: no balanced coefficient solved the coset equation");
  }
  if (!pair.sub.contains(rest))
    throw std::logic_error("decompose: residue escaped the subgroup");
  d.h = pair.sub.to_sub(rest);
  return d;
}

Element recompose(const OddPairSpec& pair, const Decomposition& d) {
  Element acc = pair.sub.from_sub(d.h);
  for (const auto& [i, r] : d.coeffs) {
    if (i < 1 || i > pair.depth() || r == 0 ||
        int_abs(r) > pair.half_indexes[static_cast<size_t>(i - 1)])
      throw std::invalid_argument("recompose: out-of-range coefficient at level " +
                                  std::to_string(i));
    acc = add(pair.ambient, acc,
              scalar_mul(pair.ambient, r, pair.lifts[static_cast<size_t>(i - 1)]));
  }
  return acc;
}

Rat k_sequence_min(const OddPairSpec& pair, long n) {
  if (n < 1 || n > pair.depth())
    throw std::invalid_argument("k_sequence_min: level outside the pair depth");
  Rat total = 0;
  for (long i = 1; i <= n; ++i)
    total += Rat(n - i + 1) *
             pair.sub.metric.norm(pair.corrections[static_cast<size_t>(i - 1)]);
  return total;
}

Rat pseudo_ultrametric_norm(const OddPairSpec& pair, const Element& x) {
  Decomposition d = decompose(pair, x);
  Rat base = pair.sub.metric.norm(d.h);
  long t = d.top();
  return t == 0 ? base : base + pair.scales[static_cast<size_t>(t - 1)];
}

Metric pair_metric(const OddPairSpec& pair) {
  auto shared = std::make_shared<const OddPairSpec>(pair);
  Metric m;
  m.group = pair.ambient;
  m.name = "pair-pseudo(" + pair.name + ")";
  m.norm = [shared](const Element& x) {
    return pseudo_ultrametric_norm(*shared, x);
  };
  return m;
}

Metric quotient_metric(const OddPairSpec& pair) {
  return chain_metric(pair.quotient_chain);
}

OneStepChain derived_chain(const OddPairSpec& pair) {
  OneStepChain c;
  c.base = pair.ambient;
  c.gens = pair.lifts;
  c.indexes = pair.quotient_chain->indexes;
  c.scale = ScaleRule{pair.scales, 1};
  c.level_hint = pair.quotient_level;
  return c;
}

std::pair<Element, Element> odd_split(const OddPairSpec& pair, const Element& g) {
  Decomposition d = decompose(pair, g);
  return {d.h, pair.project(g)};
}

Element odd_split_inverse(const OddPairSpec& pair, const Element& h,
                          const Element& q) {
  if (!belongs(pair.sub.group, h))
    throw std::invalid_argument("odd_split_inverse: first component outside H");
  const OneStepChain& qc = *pair.quotient_chain;
  long n = qc.level_of(q);
  Element acc = pair.sub.from_sub(h);
  Element rest = q;
  for (long lev = n; lev >= 1; --lev) {
    if (qc.try_level(rest) < lev) continue;
    const Int& k = pair.half_indexes[static_cast<size_t>(lev - 1)];
    bool hit = false;
    for (Int r = -k; r <= k && !hit; ++r) {
      if (r == 0) continue;
      Element cand =
          sub(qc.base, rest,
              scalar_mul(qc.base, r, qc.gens[static_cast<size_t>(lev - 1)]));
      long cl = qc.try_level(cand);
      if (cl >= 0 && cl < lev) {
        acc = add(pair.ambient, acc,
                  scalar_mul(pair.ambient, r,
                             pair.lifts[static_cast<size_t>(lev - 1)]));
        rest = std::move(cand);
        hit = true;
      }
    }
    if (!hit)
      throw std::logic_error(
          "odd_split_inverse: no balanced digit solved the coset equation");
  }
  return acc;
}

namespace {

void check_aligned(const OddPairSpec& A, const OddPairSpec& B) {
  long d = std::min(A.depth(), B.depth());
  for (long i = 0; i < d; ++i)
    if (A.quotient_chain->indexes[static_cast<size_t>(i)] !=
        B.quotient_chain->indexes[static_cast<size_t>(i)])
      throw std::invalid_argument("transfer: pairs have different index sequences");
}

}  // namespace

Element transfer(const OddPairSpec& A, const OddPairSpec& B,
                 const std::function<Element(const Element&)>& iso,
                 const Element& g) {
  check_aligned(A, B);
  Decomposition d = decompose(A, g);
  if (d.top() > B.depth())
    throw std::runtime_error(
        "transfer: decomposition exceeds the target pair's depth");
  Element acc = B.sub.from_sub(iso(d.h));
  for (const auto& [i, r] : d.coeffs)
    acc = add(B.ambient, acc,
              scalar_mul(B.ambient, r, B.lifts[static_cast<size_t>(i - 1)]));
  return acc;
}

Rat transfer_bound(const OddPairSpec& A, const OddPairSpec& B, const Rat& K) {
  check_aligned(A, B);
  long iK = 0;
  while (iK < A.depth() && A.scales[static_cast<size_t>(iK)] <= K) ++iK;
  Rat C = K;
  if (iK == 0) return C;
  if (iK > B.depth())
    throw std::runtime_error(
        "transfer_bound: scale exceeds the target pair's materialized depth");
  C += B.scales[static_cast<size_t>(iK - 1)];
  for (long i = 1; i <= iK; ++i) {
    Rat w(iK - i + 1);
    C += w * B.sub.metric.norm(B.corrections[static_cast<size_t>(i - 1)]);
    C += w * A.sub.metric.norm(A.corrections[static_cast<size_t>(i - 1)]);
  }
  return C;
}

// --- pair factories ---------------------------------------------------------

namespace {

// Fills half indexes, corrections, and scales, in that order; corrections
// come from decompose itself (m_i * g_i lies in the levels below i, so the
// pair is already usable there while it is being finished).
OddPairSpec finish_pair(OddPairSpec pair, std::vector<Rat> user_scales) {
  const auto& idx = pair.quotient_chain->indexes;
  for (const Int& m : idx) {
    if (m < 3 || m % 2 == 0)
      throw std::invalid_argument(
          "odd pair construction: every index must be odd and >= 3");
    pair.half_indexes.push_back((m - 1) / 2);
  }
  for (long i = 1; i <= pair.depth(); ++i) {
    Element mg = scalar_mul(pair.ambient, idx[static_cast<size_t>(i - 1)],
                            pair.lifts[static_cast<size_t>(i - 1)]);
    Decomposition d = decompose(pair, mg);
    if (d.top() >= i)
      throw std::logic_error(
          "odd pair construction: m_i * g_i escaped the lower levels");
    pair.corrections.push_back(d.h);
  }
  if (user_scales.empty()) {
    Rat prev = 0;
    for (long n = 1; n <= pair.depth(); ++n) {
      pair.scales.push_back(prev);  // placeholder for k_sequence_min's read
      Rat bound = k_sequence_min(pair, n);
      pair.scales.back() = std::max(bound, Rat(prev + 1));
      prev = pair.scales.back();
    }
  } else {
    if (static_cast<long>(user_scales.size()) != pair.depth())
      throw std::invalid_argument(
          "odd pair construction: scale list length must equal the depth");
    pair.scales = std::move(user_scales);
    Rat prev = 0;
    for (long n = 1; n <= pair.depth(); ++n) {
      const Rat& K = pair.scales[static_cast<size_t>(n - 1)];
      if (K <= prev || K < k_sequence_min(pair, n))
        throw std::invalid_argument(
            "inadmissible scale sequence: K_n must exceed K_{n-1} and the "
            "correction lower bound");
      prev = K;
    }
  }
  pair.quotient_chain->scale = ScaleRule{pair.scales, 1};
  return pair;
}

SubgroupSpec integers_subgroup_of_rationals() {
  SubgroupSpec s;
  s.group = GroupDescriptor::int_power(1);
  s.metric = word_metric(s.group, {Element{IntVec{{Int(1)}}},
                                   Element{IntVec{{Int(-1)}}}});
  s.contains = [](const Element& e) { return is_integer(e.as<Rational>().v); };
  s.to_sub = [](const Element& e) {
    return Element{IntVec{{num(e.as<Rational>().v)}}};
  };
  s.from_sub = [](const Element& e) {
    return Element{Rational{Rat(e.as<IntVec>().c[0])}};
  };
  return s;
}

// The chain of odd-denominator classes in [0, 1) with level i holding
// denominators dividing the schedule product Q_i.
std::shared_ptr<OneStepChain> odd_class_chain(const std::vector<Int>& schedule) {
  auto chain = std::make_shared<OneStepChain>();
  chain->base = GroupDescriptor::rationals_mod_one();
  std::vector<Int> products;
  Int q = 1;
  for (const Int& s : schedule) {
    q *= s;
    products.push_back(q);
    chain->gens.push_back(Element{QuotClass{Rat(1, q)}});
    chain->indexes.push_back(s);
  }
  chain->level_hint = [products](const Element& e) -> long {
    Int d = den(e.as<QuotClass>().v);
    if (d == 1) return 0;
    for (size_t i = 0; i < products.size(); ++i)
      if (products[i] % d == 0) return static_cast<long>(i) + 1;
    return -1;
  };
  return chain;
}

std::vector<Int> schedule_products(const std::vector<Int>& schedule) {
  std::vector<Int> out;
  Int q = 1;
  for (const Int& s : schedule) out.push_back(q *= s);
  return out;
}

// Minimal level whose product the odd part of d divides, or -1.
long odd_part_level(const Int& d, const std::vector<Int>& products) {
  Int odd = d / int_pow(2, p_adic_valuation(d, 2));
  if (odd == 1) return 0;
  for (size_t i = 0; i < products.size(); ++i)
    if (products[i] % odd == 0) return static_cast<long>(i) + 1;
  return -1;
}

}  // namespace

std::vector<Int> default_odd_schedule(long depth) {
  std::vector<Int> primes{3};
  auto next_odd_prime = [&primes]() {
    Int c = primes.back() + 2;
    while (!is_prime(c)) c += 2;
    primes.push_back(c);
  };
  std::vector<Int> out;
  for (long block = 1; static_cast<long>(out.size()) < depth; ++block) {
    while (static_cast<long>(primes.size()) < block) next_odd_prime();
    for (long j = 0; j < block && static_cast<long>(out.size()) < depth; ++j)
      out.push_back(primes[static_cast<size_t>(j)]);
  }
  return out;
}

OddPairSpec make_localized_pair(const Int& p, long depth,
                                std::vector<Rat> scales) {
  if (p == 2 || !is_prime(p))
    throw std::invalid_argument("make_localized_pair: p must be an odd prime");
  if (depth < 1)
    throw std::invalid_argument("make_localized_pair: depth must be positive");
  OddPairSpec pair;
  pair.name = "Z[1/" + p.str() + "] over Z";
  pair.ambient = GroupDescriptor::localized(p);
  pair.sub = integers_subgroup_of_rationals();
  pair.quotient_chain = std::make_shared<OneStepChain>(prufer_chain(p, depth));
  for (long i = 1; i <= depth; ++i)
    pair.lifts.push_back(
        Element{Rational{Rat(1, int_pow(p, static_cast<unsigned>(i)))}});
  Int pcopy = p;
  pair.project = [pcopy](const Element& e) {
    Rat f = mod_one(e.as<Rational>().v);
    return Element{PruferVal{num(f), p_adic_valuation(den(f), pcopy)}};
  };
  pair.quotient_level = [pcopy, depth](const Element& e) -> long {
    long i = p_adic_valuation(den(e.as<Rational>().v), pcopy);
    return i <= depth ? i : -1;
  };
  return finish_pair(std::move(pair), std::move(scales));
}

OddPairSpec make_split_sum_pair(const GroupDescriptor& h_group, Metric h_metric,
                                const GroupDescriptor& torsion, long depth,
                                std::vector<Rat> scales) {
  if (h_group.kind == GroupKind::DirectSum || torsion.kind == GroupKind::DirectSum)
    throw std::invalid_argument(
        "make_split_sum_pair: summands may not themselves be direct sums");
  OddPairSpec pair;
  pair.name = "split extension over its first summand";
  pair.ambient = GroupDescriptor::direct_sum({h_group, torsion});
  pair.sub.group = h_group;
  pair.sub.metric = std::move(h_metric);
  GroupDescriptor tors = torsion;
  pair.sub.contains = [tors](const Element& e) {
    return is_identity(tors, e.as<Tuple>()[1]);
  };
  pair.sub.to_sub = [](const Element& e) { return e.as<Tuple>()[0]; };
  pair.sub.from_sub = [tors](const Element& e) {
    return Element{Tuple{e, identity(tors)}};
  };
  auto chain = std::make_shared<OneStepChain>(standard_chain(torsion, {}, depth));
  GroupDescriptor hg = h_group;
  for (const Element& g : chain->gens)
    pair.lifts.push_back(Element{Tuple{identity(hg), g}});
  pair.quotient_chain = chain;
  pair.project = [](const Element& e) { return e.as<Tuple>()[1]; };
  pair.quotient_level = [chain](const Element& e) {
    return chain->try_level(e.as<Tuple>()[1]);
  };
  return finish_pair(std::move(pair), std::move(scales));
}

OddPairSpec make_rationals_over_dyadic_pair(std::vector<Int> schedule,
                                            std::vector<Rat> scales) {
  if (schedule.empty())
    throw std::invalid_argument("make_rationals_over_dyadic_pair: empty schedule");
  OddPairSpec pair;
  pair.name = "Q over Z[1/2]";
  pair.ambient = GroupDescriptor::rationals();
  pair.sub.group = GroupDescriptor::localized(2);
  pair.sub.metric = dyadic_metric();
  pair.sub.contains = [](const Element& e) {
    return is_power_of(den(e.as<Rational>().v), 2);
  };
  pair.sub.to_sub = [](const Element& e) { return e; };
  pair.sub.from_sub = [](const Element& e) { return e; };
  pair.quotient_chain = odd_class_chain(schedule);
  auto products = schedule_products(schedule);
  for (const Int& q : products)
    pair.lifts.push_back(Element{Rational{Rat(1, q)}});
  pair.project = [](const Element& e) {
    return Element{QuotClass{odd_class(e.as<Rational>().v)}};
  };
  pair.quotient_level = [products](const Element& e) {
    return odd_part_level(den(e.as<Rational>().v), products);
  };
  return finish_pair(std::move(pair), std::move(scales));
}

OddPairSpec make_qmodz_over_prufer2_pair(std::vector<Int> schedule,
                                         std::vector<Rat> scales) {
  if (schedule.empty())
    throw std::invalid_argument("make_qmodz_over_prufer2_pair: empty schedule");
  OddPairSpec pair;
  pair.name = "Q/Z over Z(2^inf)";
  pair.ambient = GroupDescriptor::rationals_mod_one();
  pair.sub.group = GroupDescriptor::prufer(2);
  pair.sub.metric = prufer_metric(2);
  pair.sub.contains = [](const Element& e) {
    return is_power_of(den(e.as<QuotClass>().v), 2);
  };
  pair.sub.to_sub = [](const Element& e) {
    return Element{prufer2_of(e.as<QuotClass>().v)};
  };
  pair.sub.from_sub = [](const Element& e) {
    const auto& p = e.as<PruferVal>();
    return Element{QuotClass{Rat(p.a, int_pow(2, p.i))}};
  };
  pair.quotient_chain = odd_class_chain(schedule);
  auto products = schedule_products(schedule);
  for (const Int& q : products)
    pair.lifts.push_back(Element{QuotClass{Rat(1, q)}});
  pair.project = [](const Element& e) {
    return Element{QuotClass{odd_class(e.as<QuotClass>().v)}};
  };
  pair.quotient_level = [products](const Element& e) {
    return odd_part_level(den(e.as<QuotClass>().v), products);
  };
  return finish_pair(std::move(pair), std::move(scales));
}

// --- dyadic splitting -------------------------------------------------------

std::pair<Int, PruferVal> dyadic_split(const Rat& x) {
  DyadicForm f = dyadic_form(x);
  return {f.m, prufer2_of(mod_one(x))};
}

Rat dyadic_unsplit(const Int& m, const PruferVal& q) {
  if (q.a == 0) return Rat(m);
  Int pw = int_pow(2, q.i);
  return m >= 0 ? Rat(m) + Rat(q.a, pw) : Rat(m) + Rat(q.a - pw, pw);
}

std::vector<std::pair<Int, PruferVal>> power_split(const std::vector<Rat>& xs) {
  std::vector<std::pair<Int, PruferVal>> out;
  out.reserve(xs.size());
  for (const Rat& x : xs) out.push_back(dyadic_split(x));
  return out;
}

std::vector<Rat> power_unsplit(const std::vector<std::pair<Int, PruferVal>>& ys) {
  std::vector<Rat> out;
  out.reserve(ys.size());
  for (const auto& [m, q] : ys) out.push_back(dyadic_unsplit(m, q));
  return out;
}

// --- composite split of Q ---------------------------------------------------

RationalSplitContext make_rational_split_context(std::vector<Int> schedule) {
  RationalSplitContext ctx;
  ctx.over_dyadic = make_rationals_over_dyadic_pair(schedule);
  ctx.over_prufer = make_qmodz_over_prufer2_pair(std::move(schedule));
  return ctx;
}

std::pair<Int, QuotClass> rational_split(const RationalSplitContext& ctx,
                                         const Rat& x) {
  Decomposition d = decompose(ctx.over_dyadic, Element{Rational{x}});
  Rat h = d.h.as<Rational>().v;
  auto [m, t] = dyadic_split(h);
  Element f2 = ctx.over_prufer.sub.from_sub(Element{t});
  const GroupDescriptor& qz = ctx.over_prufer.ambient;
  for (const auto& [i, r] : d.coeffs)
    f2 = add(qz, f2,
             scalar_mul(qz, r, ctx.over_prufer.lifts[static_cast<size_t>(i - 1)]));
  return {m, f2.as<QuotClass>()};
}

// --- even model space restrictions -------------------------------------------

GroupDescriptor EvenEmbedding::target() const {
  if (dyadic_copies + prufer_copies == 0)
    throw std::invalid_argument("even embedding needs a target coordinate");
  std::vector<GroupDescriptor> parts;
  for (size_t i = 0; i < dyadic_copies; ++i)
    parts.push_back(GroupDescriptor::localized(2));
  for (size_t i = 0; i < prufer_copies; ++i)
    parts.push_back(GroupDescriptor::prufer(2));
  return GroupDescriptor::direct_sum(std::move(parts));
}

namespace {

[[noreturn]] void bad_images(const std::string& what) {
  throw std::invalid_argument("even embedding: " + what +
                              " (not a homomorphism on sampled relations)");
}

void check_part_images(const GroupDescriptor& tgt, const GroupDescriptor& part,
                       const std::vector<Element>& imgs) {
  if (imgs.empty()) bad_images("missing generator images for a source part");
  switch (part.kind) {
    case GroupKind::IntPower:
      if (imgs.size() != static_cast<size_t>(part.rank_n))
        bad_images("basis image count differs from the rank");
      return;
    case GroupKind::Cyclic:
      if (imgs.size() != 1) bad_images("cyclic part takes a single image");
      if (scalar_mul(tgt, part.indexes[0], imgs[0]) != identity(tgt))
        bad_images("cyclic order relation fails");
      return;
    case GroupKind::CyclicSum:
      for (size_t k = 0; k < imgs.size(); ++k)
        if (scalar_mul(tgt, part.cyclic_index(k), imgs[k]) != identity(tgt))
          bad_images("cyclic order relation fails");
      return;
    case GroupKind::Localized:
    case GroupKind::Prufer: {
      if (part.prime != 2) bad_images("only 2-local source parts are supported");
      for (size_t j = 0; j + 1 < imgs.size(); ++j)
        if (scalar_mul(tgt, 2, imgs[j + 1]) != imgs[j])
          bad_images("level images are inconsistent under doubling");
      if (part.kind == GroupKind::Prufer &&
          scalar_mul(tgt, 2, imgs[0]) != identity(tgt))
        bad_images("torsion order relation fails at level 1");
      return;
    }
    default:
      throw std::invalid_argument(
          "even embedding: unsupported source part kind");
  }
}

Element eval_part(const GroupDescriptor& tgt, const GroupDescriptor& part,
                  const std::vector<Element>& imgs, const Element& x) {
  Element acc = identity(tgt);
  switch (part.kind) {
    case GroupKind::IntPower: {
      const auto& c = x.as<IntVec>().c;
      for (size_t j = 0; j < c.size(); ++j)
        acc = add(tgt, acc, scalar_mul(tgt, c[j], imgs[j]));
      return acc;
    }
    case GroupKind::Cyclic:
      return scalar_mul(tgt, x.as<Residue>().v, imgs[0]);
    case GroupKind::CyclicSum: {
      for (const auto& [k, v] : x.as<ResidueVec>().c) {
        if (k < 0 || static_cast<size_t>(k) >= imgs.size())
          throw std::invalid_argument(
              "even embedding: sample exceeds the supplied generator images");
        acc = add(tgt, acc, scalar_mul(tgt, v, imgs[static_cast<size_t>(k)]));
      }
      return acc;
    }
    case GroupKind::Localized: {
      const Rat& v = x.as<Rational>().v;
      unsigned s = p_adic_valuation(den(v), 2);
      size_t L = imgs.size();
      if (s > L)
        throw std::invalid_argument(
            "even embedding: sample denominator exceeds the image depth");
      return scalar_mul(tgt, num(v) * int_pow(2, static_cast<unsigned>(L) - s),
                        imgs[L - 1]);
    }
    case GroupKind::Prufer: {
      const auto& p = x.as<PruferVal>();
      size_t L = imgs.size();
      if (p.i > L)
        throw std::invalid_argument(
            "even embedding: sample exponent exceeds the image depth");
      return scalar_mul(tgt, p.a * int_pow(2, static_cast<unsigned>(L) - p.i),
                        imgs[L - 1]);
    }
    default:
      throw std::invalid_argument(
          "even embedding: unsupported source part kind");
  }
}

}  // namespace

EvenSplitReport even_split_restrict(const EvenEmbedding& emb, int bound) {
  EvenSplitReport report;
  report.source = emb.source;
  report.target = emb.target();
  report.bound = bound;
  const GroupDescriptor& tgt = report.target;

  std::vector<GroupDescriptor> parts =
      emb.source.kind == GroupKind::DirectSum
          ? emb.source.parts
          : std::vector<GroupDescriptor>{emb.source};
  if (emb.images.size() != parts.size())
    throw std::invalid_argument(
        "even embedding: one image column per source part is required");
  for (size_t p = 0; p < parts.size(); ++p)
    check_part_images(tgt, parts[p], emb.images[p]);

  auto evaluate = [&](const Element& g) {
    if (parts.size() == 1) return eval_part(tgt, parts[0], emb.images[0], g);
    const auto& t = g.as<Tuple>();
    Element acc = identity(tgt);
    for (size_t p = 0; p < parts.size(); ++p)
      acc = add(tgt, acc, eval_part(tgt, parts[p], emb.images[p], t[p]));
    return acc;
  };

  for (const Element& g : enumerate_ball(emb.source, bound)) {
    EvenSplitRow row;
    row.source = g;
    row.image = evaluate(g);
    for (size_t j = 0; j < emb.dyadic_copies; ++j) {
      const Element& coord = emb.dyadic_copies + emb.prufer_copies == 1
                                 ? row.image
                                 : row.image.as<Tuple>()[j];
      const Rat& v = coord.as<Rational>().v;
      auto mq = dyadic_split(v);
      Rat back = dyadic_unsplit(mq.first, mq.second);
      if (dyadic_split(back) != mq) report.section_exact = false;
      report.max_displacement =
          std::max(report.max_displacement, Rat(dyadic_norm(back - v)));
      if (!belongs(GroupDescriptor::prufer(2), Element{mq.second}))
        report.image_in_sum = false;
      row.split.push_back(std::move(mq));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvenEmbedding even_embedding_identity() {
  EvenEmbedding e;
  e.name = "identity";
  e.source = GroupDescriptor::localized(2);
  e.dyadic_copies = 1;
  std::vector<Element> col;
  for (unsigned l = 1; l <= 6; ++l)
    col.push_back(Element{Rational{Rat(1, int_pow(2, l))}});
  e.images = {std::move(col)};
  return e;
}

EvenEmbedding even_embedding_integers() {
  EvenEmbedding e;
  e.name = "integers";
  e.source = GroupDescriptor::int_power(1);
  e.dyadic_copies = 1;
  e.images = {{Element{Rational{Rat(1)}}}};
  return e;
}

EvenEmbedding even_embedding_diagonal() {
  EvenEmbedding e;
  e.name = "diagonal";
  e.source = GroupDescriptor::localized(2);
  e.dyadic_copies = 2;
  std::vector<Element> col;
  for (unsigned l = 1; l <= 6; ++l) {
    Element v{Rational{Rat(1, int_pow(2, l))}};
    col.push_back(Element{Tuple{v, v}});
  }
  e.images = {std::move(col)};
  return e;
}

EvenEmbedding even_embedding_bad_torsion() {
  EvenEmbedding e;
  e.name = "bad-torsion";
  e.source = GroupDescriptor::cyclic(2);
  e.dyadic_copies = 1;
  e.images = {{Element{Rational{Rat(1, 2)}}}};
  return e;
}

}  // namespace cgc
