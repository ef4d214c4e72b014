#include "cgc/groups.hpp"

#include <algorithm>

namespace cgc {

// --- descriptor construction ---------------------------------------------

GroupDescriptor GroupDescriptor::int_power(int n) {
  if (n < 0) throw std::invalid_argument("Z^n requires n >= 0");
  GroupDescriptor g;
  g.kind = GroupKind::IntPower;
  g.rank_n = n;
  return g;
}

GroupDescriptor GroupDescriptor::cyclic(const Int& m) {
  if (m < 2) throw std::invalid_argument("Z/m requires m >= 2");
  GroupDescriptor g;
  g.kind = GroupKind::Cyclic;
  g.indexes = {m};
  return g;
}

GroupDescriptor GroupDescriptor::cyclic_sum(std::vector<Int> ms, TailRule tail) {
  if (ms.empty()) throw std::invalid_argument("CyclicSum requires a nonempty index list");
  for (const Int& m : ms)
    if (m < 2) throw std::invalid_argument("CyclicSum indexes must be >= 2");
  GroupDescriptor g;
  g.kind = GroupKind::CyclicSum;
  g.indexes = std::move(ms);
  g.tail = tail;
  return g;
}

GroupDescriptor GroupDescriptor::localized(const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("Z[1/p] requires a prime p");
  GroupDescriptor g;
  g.kind = GroupKind::Localized;
  g.prime = p;
  return g;
}

GroupDescriptor GroupDescriptor::prufer(const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("Prufer(p) requires a prime p");
  GroupDescriptor g;
  g.kind = GroupKind::Prufer;
  g.prime = p;
  return g;
}

GroupDescriptor GroupDescriptor::rationals() {
  GroupDescriptor g;
  g.kind = GroupKind::Rationals;
  return g;
}

GroupDescriptor GroupDescriptor::rationals_mod_one() {
  GroupDescriptor g;
  g.kind = GroupKind::RationalsModOne;
  return g;
}

GroupDescriptor GroupDescriptor::direct_sum(std::vector<GroupDescriptor> parts) {
  std::vector<GroupDescriptor> flat;
  for (auto& p : parts) {
    if (p.kind == GroupKind::DirectSum)
      flat.insert(flat.end(), p.parts.begin(), p.parts.end());
    else
      flat.push_back(std::move(p));
  }
  if (flat.empty()) throw std::invalid_argument("Sum requires at least one part");
  if (flat.size() == 1) return flat.front();
  GroupDescriptor g;
  g.kind = GroupKind::DirectSum;
  g.parts = std::move(flat);
  return g;
}

namespace {

// 3, 3, 5, 3, 5, 7, ...: block k lists the first k odd primes, so every odd
// prime shows up unboundedly often.
Int odd_prime_diagonal(size_t j) {
  size_t block = 1;
  while (block * (block + 1) / 2 <= j) ++block;
  size_t pos = j - block * (block - 1) / 2;  // 0-based within block
  Int p = 3;
  for (size_t k = 0; k < pos; ++k) {
    p += 2;
    while (!is_prime(p)) p += 2;
  }
  return p;
}

}  // namespace

Int GroupDescriptor::cyclic_index(size_t i) const {
  if (kind != GroupKind::Cyclic && kind != GroupKind::CyclicSum)
    throw std::invalid_argument("cyclic_index: not a cyclic descriptor");
  if (i < indexes.size()) return indexes[i];
  switch (tail) {
    case TailRule::None:
      throw std::invalid_argument("cyclic coordinate out of range for a finite sum");
    case TailRule::RepeatLast:
      return indexes.back();
    case TailRule::CycleList:
      return indexes[i % indexes.size()];
    case TailRule::OddPrimes:
      return odd_prime_diagonal(i - indexes.size());
  }
  throw std::logic_error("unreachable");
}

std::optional<size_t> GroupDescriptor::cyclic_size() const {
  if (tail != TailRule::None) return std::nullopt;
  return indexes.size();
}

bool GroupDescriptor::operator==(const GroupDescriptor& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case GroupKind::IntPower:
      return rank_n == o.rank_n;
    case GroupKind::Cyclic:
    case GroupKind::CyclicSum:
      return indexes == o.indexes && tail == o.tail;
    case GroupKind::Localized:
    case GroupKind::Prufer:
      return prime == o.prime;
    case GroupKind::Rationals:
    case GroupKind::RationalsModOne:
      return true;
    case GroupKind::DirectSum:
      return parts == o.parts;
  }
  return false;
}

// --- element comparison ---------------------------------------------------

int compare(const Element& a, const Element& b) {
  if (a.value.index() != b.value.index())
    return a.value.index() < b.value.index() ? -1 : 1;
  auto cmp_int = [](const Int& x, const Int& y) { return x < y ? -1 : (y < x ? 1 : 0); };
  auto cmp_rat = [](const Rat& x, const Rat& y) { return x < y ? -1 : (y < x ? 1 : 0); };
  switch (a.value.index()) {
    case 0: {  // IntVec
      const auto &x = std::get<IntVec>(a.value).c, &y = std::get<IntVec>(b.value).c;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (size_t i = 0; i < x.size(); ++i)
        if (int c = cmp_int(x[i], y[i])) return c;
      return 0;
    }
    case 1:
      return cmp_int(std::get<Residue>(a.value).v, std::get<Residue>(b.value).v);
    case 2: {  // ResidueVec: lexicographic on (coordinate, residue) pairs
      const auto &x = std::get<ResidueVec>(a.value).c, &y = std::get<ResidueVec>(b.value).c;
      auto ix = x.begin(), iy = y.begin();
      for (; ix != x.end() && iy != y.end(); ++ix, ++iy) {
        if (ix->first != iy->first) return ix->first < iy->first ? -1 : 1;
        if (int c = cmp_int(ix->second, iy->second)) return c;
      }
      if (ix != x.end()) return 1;
      if (iy != y.end()) return -1;
      return 0;
    }
    case 3:
      return cmp_rat(std::get<Rational>(a.value).v, std::get<Rational>(b.value).v);
    case 4: {
      const auto &x = std::get<PruferVal>(a.value), &y = std::get<PruferVal>(b.value);
      if (x.i != y.i) return x.i < y.i ? -1 : 1;
      return cmp_int(x.a, y.a);
    }
    case 5:
      return cmp_rat(std::get<QuotClass>(a.value).v, std::get<QuotClass>(b.value).v);
    case 6: {
      const auto &x = std::get<Tuple>(a.value), &y = std::get<Tuple>(b.value);
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (size_t i = 0; i < x.size(); ++i)
        if (int c = compare(x[i], y[i])) return c;
      return 0;
    }
  }
  return 0;
}

// --- canonicalization helpers ---------------------------------------------

namespace {

Int mod_reduce(const Int& v, const Int& m) {
  Int r = v % m;
  if (r < 0) r += m;
  return r;
}

PruferVal prufer_canonical(Rat q, const Int& p) {
  q = mod_one(q);
  if (!is_power_of(den(q), p))
    throw std::invalid_argument("Prufer class must have a p-power denominator");
  PruferVal out;
  out.a = num(q);
  out.i = p_adic_valuation(den(q), p);
  return out;
}

Rat prufer_rat(const PruferVal& x, const Int& p) {
  return Rat(x.a, int_pow(p, x.i));
}

void check_localized(const Rat& q, const Int& p) {
  if (!is_power_of(den(q), p))
    throw std::invalid_argument("element of Z[1/p] must have a p-power denominator");
}

}  // namespace

// --- group operations ------------------------------------------------------

Element identity(const GroupDescriptor& G) {
  switch (G.kind) {
    case GroupKind::IntPower:
      return Element(IntVec{std::vector<Int>(static_cast<size_t>(G.rank_n), Int(0))});
    case GroupKind::Cyclic:
      return Element(Residue{0});
    case GroupKind::CyclicSum:
      return Element(ResidueVec{});
    case GroupKind::Localized:
    case GroupKind::Rationals:
      return Element(Rational{Rat(0)});
    case GroupKind::Prufer:
      return Element(PruferVal{0, 0});
    case GroupKind::RationalsModOne:
      return Element(QuotClass{Rat(0)});
    case GroupKind::DirectSum: {
      Tuple t;
      t.reserve(G.parts.size());
      for (const auto& p : G.parts) t.push_back(identity(p));
      return Element(std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

bool is_identity(const GroupDescriptor& G, const Element& x) {
  return compare(x, identity(G)) == 0;
}

Element add(const GroupDescriptor& G, const Element& a, const Element& b) {
  switch (G.kind) {
    case GroupKind::IntPower: {
      const auto &x = a.as<IntVec>(), &y = b.as<IntVec>();
      size_t n = static_cast<size_t>(G.rank_n);
      if (x.c.size() != n || y.c.size() != n)
        throw std::invalid_argument("integer vector length does not match Z^n");
      IntVec out;
      out.c.resize(n);
      for (size_t i = 0; i < n; ++i) out.c[i] = x.c[i] + y.c[i];
      return Element(std::move(out));
    }
    case GroupKind::Cyclic:
      return Element(Residue{mod_reduce(a.as<Residue>().v + b.as<Residue>().v, G.indexes[0])});
    case GroupKind::CyclicSum: {
      ResidueVec out = a.as<ResidueVec>();
      for (const auto& [k, v] : b.as<ResidueVec>().c) {
        Int r = mod_reduce(out.c.count(k) ? out.c[k] + v : v, G.cyclic_index(static_cast<size_t>(k)));
        if (r == 0)
          out.c.erase(k);
        else
          out.c[k] = r;
      }
      return Element(std::move(out));
    }
    case GroupKind::Localized: {
      Rat s = a.as<Rational>().v + b.as<Rational>().v;
      check_localized(a.as<Rational>().v, G.prime);
      check_localized(b.as<Rational>().v, G.prime);
      return Element(Rational{s});
    }
    case GroupKind::Rationals:
      return Element(Rational{a.as<Rational>().v + b.as<Rational>().v});
    case GroupKind::Prufer: {
      const auto &x = a.as<PruferVal>(), &y = b.as<PruferVal>();
      return Element(prufer_canonical(prufer_rat(x, G.prime) + prufer_rat(y, G.prime), G.prime));
    }
    case GroupKind::RationalsModOne:
      return Element(QuotClass{mod_one(a.as<QuotClass>().v + b.as<QuotClass>().v)});
    case GroupKind::DirectSum: {
      const auto &x = a.as<Tuple>(), &y = b.as<Tuple>();
      if (x.size() != G.parts.size() || y.size() != G.parts.size())
        throw std::invalid_argument("tuple length does not match the direct sum");
      Tuple out;
      out.reserve(G.parts.size());
      for (size_t i = 0; i < G.parts.size(); ++i) out.push_back(add(G.parts[i], x[i], y[i]));
      return Element(std::move(out));
    }
  }
  throw std::logic_error("unreachable");
}

Element negate(const GroupDescriptor& G, const Element& a) {
  switch (G.kind) {
    case GroupKind::IntPower: {
      IntVec out = a.as<IntVec>();
      for (auto& v : out.c) v = -v;
      return Element(std::move(out));
    }
    case GroupKind::Cyclic:
      return Element(Residue{mod_reduce(-a.as<Residue>().v, G.indexes[0])});
    case GroupKind::CyclicSum: {
      ResidueVec out;
      for (const auto& [k, v] : a.as<ResidueVec>().c)
        out.c[k] = G.cyclic_index(static_cast<size_t>(k)) - v;
      return Element(std::move(out));
    }
    case GroupKind::Localized:
    case GroupKind::Rationals:
      return Element(Rational{-a.as<Rational>().v});
    case GroupKind::Prufer: {
      const auto& x = a.as<PruferVal>();
      if (x.a == 0) return a;
      return Element(PruferVal{int_pow(G.prime, x.i) - x.a, x.i});
    }
    case GroupKind::RationalsModOne:
      return Element(QuotClass{mod_one(-a.as<QuotClass>().v)});
    case GroupKind::DirectSum: {
      const auto& x = a.as<Tuple>();
      Tuple out;
      out.reserve(G.parts.size());
      for (size_t i = 0; i < G.parts.size(); ++i) out.push_back(negate(G.parts[i], x[i]));
      return Element(std::move(out));
    }
  }
  throw std::logic_error("unreachable");
}

Element sub(const GroupDescriptor& G, const Element& a, const Element& b) {
  return add(G, a, negate(G, b));
}

Element scalar_mul(const GroupDescriptor& G, const Int& n, const Element& x) {
  if (n == 0) return identity(G);
  Element base = n < 0 ? negate(G, x) : x;
  Int k = int_abs(n);
  Element acc = identity(G);
  Element pow2 = base;
  while (k > 0) {
    if (k % 2 == 1) acc = add(G, acc, pow2);
    k /= 2;
    if (k > 0) pow2 = add(G, pow2, pow2);
  }
  return acc;
}

bool belongs(const GroupDescriptor& G, const Element& x) {
  try {
    switch (G.kind) {
      case GroupKind::IntPower:
        return x.is<IntVec>() && x.as<IntVec>().c.size() == static_cast<size_t>(G.rank_n);
      case GroupKind::Cyclic:
        return x.is<Residue>() && x.as<Residue>().v >= 0 && x.as<Residue>().v < G.indexes[0];
      case GroupKind::CyclicSum: {
        if (!x.is<ResidueVec>()) return false;
        for (const auto& [k, v] : x.as<ResidueVec>().c) {
          if (k < 0 || v <= 0) return false;
          if (v >= G.cyclic_index(static_cast<size_t>(k))) return false;
        }
        return true;
      }
      case GroupKind::Localized:
        return x.is<Rational>() && is_power_of(den(x.as<Rational>().v), G.prime);
      case GroupKind::Rationals:
        return x.is<Rational>();
      case GroupKind::Prufer: {
        if (!x.is<PruferVal>()) return false;
        const auto& p = x.as<PruferVal>();
        if (p.a == 0) return p.i == 0;
        return p.a > 0 && p.a < int_pow(G.prime, p.i) && p.a % G.prime != 0;
      }
      case GroupKind::RationalsModOne:
        return x.is<QuotClass>() && x.as<QuotClass>().v >= 0 && x.as<QuotClass>().v < 1;
      case GroupKind::DirectSum: {
        if (!x.is<Tuple>() || x.as<Tuple>().size() != G.parts.size()) return false;
        for (size_t i = 0; i < G.parts.size(); ++i)
          if (!belongs(G.parts[i], x.as<Tuple>()[i])) return false;
        return true;
      }
    }
  } catch (const std::invalid_argument&) {
    return false;
  }
  return false;
}

// --- truncations ------------------------------------------------------------

namespace {

void guard_size(size_t n, size_t cap) {
  if (n > cap) throw std::runtime_error("enumerate_ball: truncation exceeds the size cap");
}

std::vector<Element> ball_impl(const GroupDescriptor& G, int B, size_t cap) {
  std::vector<Element> out;
  switch (G.kind) {
    case GroupKind::IntPower: {
      size_t n = static_cast<size_t>(G.rank_n);
      size_t total = 1;
      for (size_t i = 0; i < n; ++i) {
        total *= static_cast<size_t>(2 * B + 1);
        guard_size(total, cap);
      }
      std::vector<Int> cur(n, Int(-B));
      if (n == 0) {
        out.push_back(Element(IntVec{}));
        break;
      }
      while (true) {
        out.push_back(Element(IntVec{cur}));
        size_t k = n;
        while (k > 0) {
          if (cur[k - 1] < B) {
            ++cur[k - 1];
            break;
          }
          cur[k - 1] = -B;
          --k;
        }
        if (k == 0) break;
      }
      break;
    }
    case GroupKind::Cyclic: {
      guard_size(static_cast<size_t>(G.indexes[0]), cap);
      for (Int v = 0; v < G.indexes[0]; ++v) out.push_back(Element(Residue{v}));
      break;
    }
    case GroupKind::CyclicSum: {
      size_t coords = static_cast<size_t>(B);
      if (auto sz = G.cyclic_size()) coords = std::min(coords, *sz);
      out.push_back(Element(ResidueVec{}));
      for (size_t k = 0; k < coords; ++k) {
        Int m = G.cyclic_index(k);
        guard_size(out.size() * static_cast<size_t>(m), cap);
        std::vector<Element> next;
        next.reserve(out.size() * static_cast<size_t>(m));
        for (const auto& e : out)
          for (Int r = 0; r < m; ++r) {
            ResidueVec rv = e.as<ResidueVec>();
            if (r != 0) rv.c[static_cast<long>(k)] = r;
            next.push_back(Element(std::move(rv)));
          }
        out = std::move(next);
      }
      break;
    }
    case GroupKind::Localized: {
      for (Int q = 1; q <= B; q *= G.prime) {
        Int hi = q * B;
        for (Int a = -hi; a <= hi; ++a) {
          if (q > 1 && a % G.prime == 0) continue;
          out.push_back(Element(Rational{Rat(a, q)}));
          guard_size(out.size(), cap);
        }
      }
      break;
    }
    case GroupKind::Rationals: {
      for (Int b = 1; b <= B; ++b)
        for (Int a = -b * B; a <= b * B; ++a) {
          if (boost::multiprecision::gcd(int_abs(a), b) != 1) continue;
          out.push_back(Element(Rational{Rat(a, b)}));
          guard_size(out.size(), cap);
        }
      break;
    }
    case GroupKind::Prufer: {
      out.push_back(Element(PruferVal{0, 0}));
      Int q = 1;
      for (int i = 1; i <= B; ++i) {
        q *= G.prime;
        for (Int a = 1; a < q; ++a) {
          if (a % G.prime == 0) continue;
          out.push_back(Element(PruferVal{a, static_cast<unsigned>(i)}));
          guard_size(out.size(), cap);
        }
      }
      break;
    }
    case GroupKind::RationalsModOne: {
      out.push_back(Element(QuotClass{Rat(0)}));
      for (Int b = 2; b <= B; ++b)
        for (Int a = 1; a < b; ++a) {
          if (boost::multiprecision::gcd(a, b) != 1) continue;
          out.push_back(Element(QuotClass{Rat(a, b)}));
          guard_size(out.size(), cap);
        }
      break;
    }
    case GroupKind::DirectSum: {
      out.push_back(Element(Tuple{}));
      for (const auto& part : G.parts) {
        auto pb = ball_impl(part, B, cap);
        guard_size(out.size() * pb.size(), cap);
        std::vector<Element> next;
        next.reserve(out.size() * pb.size());
        for (const auto& prefix : out)
          for (const auto& pe : pb) {
            Tuple t = prefix.as<Tuple>();
            t.push_back(pe);
            next.push_back(Element(std::move(t)));
          }
        out = std::move(next);
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Element> enumerate_ball(const GroupDescriptor& G, int B, size_t size_cap) {
  if (B < 0) throw std::invalid_argument("enumerate_ball: bound must be >= 0");
  auto out = ball_impl(G, B, size_cap);
  std::sort(out.begin(), out.end(), ElementLess{});
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Element& a, const Element& b) { return compare(a, b) == 0; }),
            out.end());
  return out;
}

// --- invariants ---------------------------------------------------------------

std::optional<long> torsion_free_rank(const GroupDescriptor& G) {
  switch (G.kind) {
    case GroupKind::IntPower:
      return G.rank_n;
    case GroupKind::Localized:
    case GroupKind::Rationals:
      return 1;
    case GroupKind::Cyclic:
    case GroupKind::CyclicSum:
    case GroupKind::Prufer:
    case GroupKind::RationalsModOne:
      return 0;
    case GroupKind::DirectSum: {
      long total = 0;
      for (const auto& p : G.parts) {
        auto r = torsion_free_rank(p);
        if (!r) return std::nullopt;
        total += *r;
      }
      return total;
    }
  }
  return std::nullopt;
}

bool is_finitely_generated(const GroupDescriptor& G) {
  switch (G.kind) {
    case GroupKind::IntPower:
    case GroupKind::Cyclic:
      return true;
    case GroupKind::CyclicSum:
      return G.tail == TailRule::None;
    case GroupKind::Localized:
    case GroupKind::Prufer:
    case GroupKind::Rationals:
    case GroupKind::RationalsModOne:
      return false;
    case GroupKind::DirectSum:
      for (const auto& p : G.parts)
        if (!is_finitely_generated(p)) return false;
      return true;
  }
  return false;
}

bool is_locally_finite(const GroupDescriptor& G) {
  switch (G.kind) {
    case GroupKind::IntPower:
      return G.rank_n == 0;
    case GroupKind::Cyclic:
    case GroupKind::CyclicSum:
    case GroupKind::Prufer:
    case GroupKind::RationalsModOne:
      return true;
    case GroupKind::Localized:
    case GroupKind::Rationals:
      return false;
    case GroupKind::DirectSum:
      for (const auto& p : G.parts)
        if (!is_locally_finite(p)) return false;
      return true;
  }
  return false;
}

InvariantRecord invariants(const GroupDescriptor& G) {
  InvariantRecord rec;
  rec.torsion_free_rank = torsion_free_rank(G);
  rec.finitely_generated = is_finitely_generated(G);
  if (rec.torsion_free_rank) {
    rec.cd_q = *rec.torsion_free_rank + (rec.finitely_generated ? 0 : 1);
    rec.asdim = *rec.torsion_free_rank;
  }
  return rec;
}

}  // namespace cgc
