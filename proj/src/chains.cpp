#include "cgc/chains.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cgc {

Rat ScaleRule::at(long i) const {
  if (i < 1) throw std::invalid_argument("scale index must be >= 1");
  auto len = static_cast<long>(prefix.size());
  if (i <= len) return prefix[static_cast<size_t>(i - 1)];
  Rat base = prefix.empty() ? Rat(0) : prefix.back();
  return base + step * Rat(i - len);
}

bool ScaleRule::strictly_increasing() const {
  if (step <= 0) return false;
  if (!prefix.empty() && prefix.front() <= 0) return false;
  for (size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i] <= prefix[i - 1]) return false;
  return prefix.empty() ? step > 0 : true;  // continuation starts at back+step
}

namespace {

std::string strip(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Rat parse_rat_token(const std::string& raw) {
  std::string tok = strip(raw);
  auto slash = tok.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(tok));
    Int num(strip(tok.substr(0, slash)));
    Int den(strip(tok.substr(slash + 1)));
    if (den <= 0) throw std::invalid_argument("nonpositive denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad scale value '" + raw + "'");
  }
}

void check_scales(const ScaleRule& s, bool validate) {
  if (!validate) return;
  if (!s.strictly_increasing() || s.at(1) <= 0)
    throw std::invalid_argument(
        "scale sequence must be positive and strictly increasing");
}

}  // namespace

ScaleRule parse_scale_rule(const std::string& text) {
  ScaleRule rule;
  if (text.empty()) return rule;
  std::string list = text;
  auto semi = text.find(';');
  if (semi != std::string::npos) {
    list = text.substr(0, semi);
    std::string st = text.substr(semi + 1);
    if (!st.empty() && st[0] == '+') st = st.substr(1);
    rule.step = parse_rat_token(st);
  }
  std::stringstream in(list);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) rule.prefix.push_back(parse_rat_token(tok));
  return rule;
}

// --- membership -----------------------------------------------------------

namespace {

bool in_sorted(const std::vector<Element>& set, const Element& x) {
  return std::binary_search(set.begin(), set.end(), x, ElementLess{});
}

}  // namespace

long OneStepChain::try_level(const Element& x) const {
  if (is_identity(base, x)) return 0;
  if (!levels.empty()) {
    for (size_t L = 1; L < levels.size(); ++L)
      if (in_sorted(levels[L], x)) return static_cast<long>(L);
    return -1;
  }
  if (level_hint) {
    long h = level_hint(x);
    return (h >= 0 && h <= depth()) ? h : -1;
  }
  return -1;
}

long OneStepChain::level_of(const Element& x) const {
  long L = try_level(x);
  if (L < 0)
    throw std::runtime_error(
        "chain is under-materialized: element lies outside the first " +
        std::to_string(depth()) + " levels");
  return L;
}

bool OneStepChain::member(const Element& x, long L) const {
  if (L < 0) return false;
  long found = try_level(x);
  if (found >= 0) return found <= L;
  if (L <= depth()) return false;
  throw std::runtime_error("chain is under-materialized: membership at level " +
                           std::to_string(L) + " is undecidable");
}

// --- construction ---------------------------------------------------------

namespace {

// Minimal chain level of a value inside one cyclic-coordinate part.
long part_level(const GroupDescriptor& part, const Element& x) {
  if (part.kind == GroupKind::Cyclic) return x.as<Residue>().v == 0 ? 0 : 1;
  const auto& c = x.as<ResidueVec>().c;
  return c.empty() ? 0 : c.rbegin()->first + 1;
}

}  // namespace

OneStepChain standard_chain(const GroupDescriptor& G, ScaleRule scale,
                            long depth_cap, bool validate_scales) {
  if (depth_cap < 1)
    throw std::invalid_argument("standard_chain: depth cap must be positive");
  check_scales(scale, validate_scales);
  OneStepChain c;
  c.base = G;
  c.scale = scale;
  switch (G.kind) {
    case GroupKind::Cyclic: {
      c.gens = {Element{Residue{1}}};
      c.indexes = {G.indexes[0]};
      c.covers_group = true;
      c.level_hint = [](const Element& x) {
        return x.as<Residue>().v == 0 ? 0L : 1L;
      };
      return c;
    }
    case GroupKind::CyclicSum: {
      auto size = G.cyclic_size();
      long D = size ? std::min<long>(depth_cap, static_cast<long>(*size))
                    : depth_cap;
      for (long k = 0; k < D; ++k) {
        c.gens.push_back(Element{ResidueVec{{{k, Int(1)}}}});
        c.indexes.push_back(G.cyclic_index(static_cast<size_t>(k)));
      }
      c.covers_group = size && D == static_cast<long>(*size);
      c.level_hint = [G](const Element& x) { return part_level(G, x); };
      return c;
    }
    case GroupKind::DirectSum: {
      long total = 0;
      bool all_finite = true;
      std::vector<long> offsets;
      for (size_t j = 0; j < G.parts.size(); ++j) {
        const auto& part = G.parts[j];
        std::optional<size_t> size;
        if (part.kind == GroupKind::Cyclic)
          size = 1;
        else if (part.kind == GroupKind::CyclicSum)
          size = part.cyclic_size();
        else
          throw std::invalid_argument(
              "standard_chain: direct sum parts must be cyclic sums");
        if (!size && j + 1 < G.parts.size())
          throw std::invalid_argument(
              "standard_chain: only the last summand may be infinite");
        offsets.push_back(total);
        all_finite = all_finite && size.has_value();
        total = size ? total + static_cast<long>(*size) : depth_cap;
      }
      long D = std::min(depth_cap, total);
      for (size_t j = 0; j < G.parts.size() && offsets[j] < D; ++j) {
        const auto& part = G.parts[j];
        auto sub = standard_chain(part, {}, D - offsets[j], false);
        for (long k = 0; k < sub.depth(); ++k) {
          Tuple t;
          for (size_t q = 0; q < G.parts.size(); ++q)
            t.push_back(q == j ? sub.gens[static_cast<size_t>(k)]
                               : identity(G.parts[q]));
          c.gens.push_back(Element{std::move(t)});
          c.indexes.push_back(sub.indexes[static_cast<size_t>(k)]);
        }
      }
      c.covers_group =
          all_finite && D == total && static_cast<long>(c.gens.size()) == total;
      auto parts = G.parts;
      auto offs = offsets;
      c.level_hint = [parts, offs](const Element& x) {
        const auto& t = x.as<Tuple>();
        long L = 0;
        for (size_t j = 0; j < parts.size(); ++j) {
          long h = part_level(parts[j], t[j]);
          if (h > 0) L = std::max(L, offs[j] + h);
        }
        return L;
      };
      return c;
    }
    default:
      throw std::invalid_argument(
          "standard_chain: descriptor has no cyclic-coordinate chain");
  }
}

OneStepChain prufer_chain(const Int& p, long depth, ScaleRule scale,
                          bool validate_scales) {
  if (!is_prime(p)) throw std::invalid_argument("prufer_chain: p must be prime");
  if (depth < 1) throw std::invalid_argument("prufer_chain: depth must be positive");
  check_scales(scale, validate_scales);
  OneStepChain c;
  c.base = GroupDescriptor::prufer(p);
  c.scale = scale;
  for (long k = 1; k <= depth; ++k) {
    c.gens.push_back(Element{PruferVal{1, static_cast<unsigned>(k)}});
    c.indexes.push_back(p);
  }
  c.level_hint = [](const Element& x) {
    return static_cast<long>(x.as<PruferVal>().i);
  };
  return c;
}

OneStepChain rationals_mod_one_chain(long depth, ScaleRule scale,
                                     bool validate_scales) {
  if (depth < 1)
    throw std::invalid_argument("rationals_mod_one_chain: depth must be positive");
  check_scales(scale, validate_scales);
  OneStepChain c;
  c.base = GroupDescriptor::rationals_mod_one();
  c.scale = scale;
  Int fact = 1;  // level L is (1/(L+1)!) Z / Z
  for (long k = 1; k <= depth; ++k) {
    fact *= Int(k + 1);
    c.gens.push_back(Element{QuotClass{Rat(1, fact)}});
    c.indexes.push_back(Int(k + 1));
  }
  c.level_hint = [depth](const Element& x) {
    Int q = den(x.as<QuotClass>().v);
    Int fact = 1;
    for (long L = 0; L <= depth; ++L) {
      if (q == 1 || fact % q == 0) return L;
      fact *= Int(L + 2);
    }
    return -1L;
  };
  return c;
}

// --- prime refinement -----------------------------------------------------

namespace {

// prev joined with r * g for r in [0, m): one chain step, order-checked.
std::vector<Element> extend_level(const GroupDescriptor& G,
                                  const std::vector<Element>& prev,
                                  const Element& g, const Int& m) {
  std::vector<Element> next;
  next.reserve(prev.size() * static_cast<size_t>(m));
  for (Int r = 0; r < m; ++r) {
    Element shift = scalar_mul(G, r, g);
    for (const auto& y : prev) next.push_back(add(G, shift, y));
  }
  std::sort(next.begin(), next.end(), ElementLess{});
  next.erase(std::unique(next.begin(), next.end()), next.end());
  if (next.size() != prev.size() * static_cast<size_t>(m))
    throw std::runtime_error(
        "chain index mismatch: generator order over the previous level "
        "differs from the declared index");
  return next;
}

}  // namespace

OneStepChain refine_to_prime(const OneStepChain& c, ScaleRule scale,
                             size_t max_level_size) {
  check_scales(scale, true);
  OneStepChain r;
  r.base = c.base;
  r.scale = scale;
  r.levels.push_back({identity(c.base)});
  bool full = true;
  for (long k = 0; k < c.depth(); ++k) {
    const Element& g = c.gens[static_cast<size_t>(k)];
    const Int& m = c.indexes[static_cast<size_t>(k)];
    if (Rat(Int(r.levels.back().size())) * Rat(m) > Rat(Int(max_level_size))) {
      full = false;
      break;
    }
    Int quotient = m;
    for (const Int& p : prime_factors(m)) {
      quotient /= p;
      Element gen = scalar_mul(c.base, quotient, g);
      r.levels.push_back(extend_level(c.base, r.levels.back(), gen, p));
      r.gens.push_back(gen);
      r.indexes.push_back(p);
    }
    if (c.levels.size() > static_cast<size_t>(k) + 1 &&
        r.levels.back() != c.levels[static_cast<size_t>(k) + 1])
      throw std::runtime_error(
          "refined levels disagree with the source chain levels");
  }
  r.covers_group = c.covers_group && full;
  return r;
}

Rat ultrametric_distance(const OneStepChain& c, const Element& a, const Element& b) {
  long L = c.level_of(sub(c.base, a, b));
  return L == 0 ? Rat(0) : c.scale_at(L);
}

// --- standardization ------------------------------------------------------

namespace {

std::vector<Int> refine_list(const std::vector<Int>& ms) {
  std::vector<Int> out;
  for (const Int& m : ms)
    for (const Int& p : prime_factors(m)) out.push_back(p);
  return out;
}

// The standardized index stream as a descriptor. Exact for finite sources
// and for periodic continuations; for RepeatLast the repeated block must be
// a single repeated prime, i.e. the last index a prime power.
GroupDescriptor standard_target(const GroupDescriptor& G,
                                const std::vector<Int>& materialized) {
  switch (G.kind) {
    case GroupKind::Prufer:
      return GroupDescriptor::cyclic_sum({G.prime}, TailRule::RepeatLast);
    case GroupKind::Cyclic:
      return GroupDescriptor::cyclic_sum(refine_list(G.indexes));
    case GroupKind::CyclicSum:
      switch (G.tail) {
        case TailRule::None:
          return GroupDescriptor::cyclic_sum(refine_list(G.indexes));
        case TailRule::CycleList:
          return GroupDescriptor::cyclic_sum(refine_list(G.indexes),
                                             TailRule::CycleList);
        case TailRule::OddPrimes:
          return GroupDescriptor::cyclic_sum(refine_list(G.indexes),
                                             TailRule::OddPrimes);
        case TailRule::RepeatLast: {
          auto block = prime_factors(G.indexes.back());
          if (std::count(block.begin(), block.end(), block.front()) !=
              static_cast<long>(block.size()))
            throw std::runtime_error(
                "standardize: repeated index " + G.indexes.back().str() +
                " mixes primes, so the refined stream is not periodic from "
                "the start; refine an explicit truncation instead");
          return GroupDescriptor::cyclic_sum(refine_list(G.indexes),
                                             TailRule::RepeatLast);
        }
      }
      throw std::logic_error("unreachable");
    default:
      // Q/Z reaches here: its factorial chain refines to an aperiodic prime
      // stream, so only the materialized truncation is expressible.
      return GroupDescriptor::cyclic_sum(materialized);
  }
}

}  // namespace

Standardization standardize(const GroupDescriptor& G, size_t max_level_size) {
  if (!is_locally_finite(G))
    throw std::invalid_argument(
        "standardize requires a locally finite group (every finitely "
        "generated subgroup finite)");
  OneStepChain natural;
  switch (G.kind) {
    case GroupKind::Prufer:
      natural = prufer_chain(G.prime, 64);
      break;
    case GroupKind::RationalsModOne:
      natural = rationals_mod_one_chain(20);
      break;
    default:
      natural = standard_chain(G, {}, 64);
  }
  auto refined = std::make_shared<OneStepChain>(
      refine_to_prime(natural, {}, max_level_size));
  if (refined->depth() == 0)
    throw std::runtime_error("standardize: level size cap leaves no levels");

  Standardization s;
  s.target = standard_target(G, refined->indexes);
  s.refined = refined;
  s.target_chain = std::make_shared<OneStepChain>(
      standard_chain(s.target, {}, refined->depth()));

  GroupDescriptor src = G;
  s.forward = [src, refined](const Element& x) {
    long L = refined->level_of(x);
    Element rem = x;
    std::map<long, Int> digits;
    for (long k = L; k >= 1; --k) {
      const Element& g = refined->gens[static_cast<size_t>(k - 1)];
      const Int& p = refined->indexes[static_cast<size_t>(k - 1)];
      bool hit = false;
      for (Int cdig = 0; cdig < p; ++cdig) {
        Element rest = sub(src, rem, scalar_mul(src, cdig, g));
        if (refined->member(rest, k - 1)) {
          if (cdig != 0) digits[k - 1] = cdig;
          rem = rest;
          hit = true;
          break;
        }
      }
      if (!hit)
        throw std::logic_error("standardize: digit extraction failed");
    }
    return Element{ResidueVec{std::move(digits)}};
  };
  s.backward = [src, refined](const Element& y) {
    Element acc = identity(src);
    for (const auto& [k, cdig] : y.as<ResidueVec>().c) {
      if (k < 0 || k >= refined->depth())
        throw std::invalid_argument(
            "standardize: digit coordinate past the materialized depth");
      acc = add(src, acc,
                scalar_mul(src, cdig, refined->gens[static_cast<size_t>(k)]));
    }
    return acc;
  };
  return s;
}

}  // namespace cgc
