#include "cgc/text.hpp"

#include <cctype>
#include <sstream>

namespace cgc {

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  Int integer() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) throw ParseError("expected an integer", start);
    return Int(s.substr(start, pos - start));
  }
  long small_integer() {
    Int v = integer();
    if (v > 1000000 || v < -1000000) throw ParseError("integer out of range here", pos);
    return static_cast<long>(v);
  }
};

GroupDescriptor parse_descriptor_at(Cursor& c);

GroupDescriptor parse_atom(Cursor& c) {
  c.skip_ws();
  size_t start = c.pos;
  if (c.eat_word("Sum(")) {
    std::vector<GroupDescriptor> parts;
    parts.push_back(parse_descriptor_at(c));
    while (c.eat(',')) parts.push_back(parse_descriptor_at(c));
    c.expect(')');
    return GroupDescriptor::direct_sum(std::move(parts));
  }
  if (c.eat_word("CyclicSum(")) {
    c.expect('[');
    std::vector<Int> ms;
    ms.push_back(c.integer());
    while (c.eat(',')) ms.push_back(c.integer());
    c.expect(']');
    TailRule tail = TailRule::None;
    if (c.eat(';')) {
      if (c.eat_word("repeat-last"))
        tail = TailRule::RepeatLast;
      else if (c.eat_word("cycle"))
        tail = TailRule::CycleList;
      else if (c.eat_word("odd-primes"))
        tail = TailRule::OddPrimes;
      else
        throw ParseError("unknown continuation rule", c.pos);
    }
    c.expect(')');
    try {
      return GroupDescriptor::cyclic_sum(std::move(ms), tail);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
  }
  if (c.eat_word("Prufer(")) {
    Int p = c.integer();
    c.expect(')');
    try {
      return GroupDescriptor::prufer(p);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
  }
  if (c.eat_word("Q/Z")) return GroupDescriptor::rationals_mod_one();
  if (c.eat_word("Q")) return GroupDescriptor::rationals();
  if (c.eat_word("Z")) {
    if (c.eat('^')) {
      long n = c.small_integer();
      if (n < 0) throw ParseError("Z^n requires n >= 0", start);
      return GroupDescriptor::int_power(static_cast<int>(n));
    }
    if (c.eat('/')) {
      Int m = c.integer();
      try {
        return GroupDescriptor::cyclic(m);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), start);
      }
    }
    if (c.eat('[')) {
      if (!c.eat_word("1/")) throw ParseError("expected 1/p in Z[1/p]", c.pos);
      Int p = c.integer();
      c.expect(']');
      try {
        return GroupDescriptor::localized(p);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), start);
      }
    }
    if (c.eat('(')) {
      Int p = c.integer();
      if (!c.eat_word("^inf")) throw ParseError("expected p^inf in Z(p^inf)", c.pos);
      c.expect(')');
      try {
        return GroupDescriptor::prufer(p);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), start);
      }
    }
    return GroupDescriptor::int_power(1);
  }
  throw ParseError("expected a group descriptor", c.pos);
}

GroupDescriptor parse_descriptor_at(Cursor& c) { return parse_atom(c); }

}  // namespace

GroupDescriptor parse_descriptor(const std::string& text) {
  Cursor c{text};
  GroupDescriptor g = parse_descriptor_at(c);
  if (!c.done()) throw ParseError("trailing input after descriptor", c.pos);
  return g;
}

std::string descriptor_text(const GroupDescriptor& G) {
  std::ostringstream os;
  switch (G.kind) {
    case GroupKind::IntPower:
      if (G.rank_n == 1)
        os << "Z";
      else
        os << "Z^" << G.rank_n;
      break;
    case GroupKind::Cyclic:
      os << "Z/" << G.indexes[0];
      break;
    case GroupKind::CyclicSum: {
      os << "CyclicSum([";
      for (size_t i = 0; i < G.indexes.size(); ++i) {
        if (i) os << ", ";
        os << G.indexes[i];
      }
      os << "]";
      switch (G.tail) {
        case TailRule::None:
          break;
        case TailRule::RepeatLast:
          os << "; repeat-last";
          break;
        case TailRule::CycleList:
          os << "; cycle";
          break;
        case TailRule::OddPrimes:
          os << "; odd-primes";
          break;
      }
      os << ")";
      break;
    }
    case GroupKind::Localized:
      os << "Z[1/" << G.prime << "]";
      break;
    case GroupKind::Prufer:
      os << "Prufer(" << G.prime << ")";
      break;
    case GroupKind::Rationals:
      os << "Q";
      break;
    case GroupKind::RationalsModOne:
      os << "Q/Z";
      break;
    case GroupKind::DirectSum:
      os << "Sum(";
      for (size_t i = 0; i < G.parts.size(); ++i) {
        if (i) os << ", ";
        os << descriptor_text(G.parts[i]);
      }
      os << ")";
      break;
  }
  return os.str();
}

// --- elements -----------------------------------------------------------

namespace {

Rat parse_rat(Cursor& c) {
  Int a = c.integer();
  if (c.eat('/')) {
    Int b = c.integer();
    if (b <= 0) throw ParseError("denominator must be positive", c.pos);
    return Rat(a, b);
  }
  return Rat(a);
}

Element parse_element_at(const GroupDescriptor& G, Cursor& c) {
  switch (G.kind) {
    case GroupKind::IntPower: {
      size_t n = static_cast<size_t>(G.rank_n);
      IntVec v;
      if (n == 1 && c.peek() != '(') {
        v.c.push_back(c.integer());
        return Element(std::move(v));
      }
      c.expect('(');
      if (n == 0) {
        c.expect(')');
        return Element(std::move(v));
      }
      v.c.push_back(c.integer());
      while (c.eat(',')) v.c.push_back(c.integer());
      c.expect(')');
      if (v.c.size() != n) throw ParseError("vector length does not match Z^n", c.pos);
      return Element(std::move(v));
    }
    case GroupKind::Cyclic: {
      Int v = c.integer() % G.indexes[0];
      if (v < 0) v += G.indexes[0];
      return Element(Residue{v});
    }
    case GroupKind::CyclicSum: {
      if (c.peek() == '0' && !G.indexes.empty()) {
        // bare 0 is accepted as the identity
        size_t save = c.pos;
        Int v = c.integer();
        if (v == 0) return Element(ResidueVec{});
        c.pos = save;
      }
      c.expect('{');
      ResidueVec out;
      if (!c.eat('}')) {
        do {
          long k = c.small_integer();
          if (k < 0) throw ParseError("coordinate must be >= 0", c.pos);
          c.expect(':');
          Int m = G.cyclic_index(static_cast<size_t>(k));
          Int v = c.integer() % m;
          if (v < 0) v += m;
          if (v != 0) out.c[k] = v;
        } while (c.eat(','));
        c.expect('}');
      }
      return Element(std::move(out));
    }
    case GroupKind::Localized: {
      Rat q = parse_rat(c);
      if (!is_power_of(den(q), G.prime))
        throw ParseError("denominator must be a power of the localized prime", c.pos);
      return Element(Rational{q});
    }
    case GroupKind::Rationals:
      return Element(Rational{parse_rat(c)});
    case GroupKind::Prufer: {
      if (c.peek() == '(') {
        c.expect('(');
        Int a = c.integer();
        c.expect(',');
        long i = c.small_integer();
        c.expect(')');
        if (i < 0) throw ParseError("Prufer level must be >= 0", c.pos);
        Rat q(a, int_pow(G.prime, static_cast<unsigned>(i)));
        q = mod_one(q);
        if (!is_power_of(den(q), G.prime))
          throw ParseError("not a p-power denominator class", c.pos);
        return Element(PruferVal{num(q), p_adic_valuation(den(q), G.prime)});
      }
      Rat q = mod_one(parse_rat(c));
      if (!is_power_of(den(q), G.prime))
        throw ParseError("not a p-power denominator class", c.pos);
      return Element(PruferVal{num(q), p_adic_valuation(den(q), G.prime)});
    }
    case GroupKind::RationalsModOne:
      return Element(QuotClass{mod_one(parse_rat(c))});
    case GroupKind::DirectSum: {
      c.expect('(');
      Tuple t;
      t.reserve(G.parts.size());
      for (size_t i = 0; i < G.parts.size(); ++i) {
        if (i) c.expect(',');
        t.push_back(parse_element_at(G.parts[i], c));
      }
      c.expect(')');
      return Element(std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Element parse_element(const GroupDescriptor& G, const std::string& text) {
  Cursor c{text};
  Element e = parse_element_at(G, c);
  if (!c.done()) throw ParseError("trailing input after element", c.pos);
  return e;
}

std::string element_text(const Element& x) {
  std::ostringstream os;
  switch (x.value.index()) {
    case 0: {
      const auto& v = std::get<IntVec>(x.value).c;
      if (v.size() == 1) {
        os << v[0];
        break;
      }
      os << "(";
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
      }
      os << ")";
      break;
    }
    case 1:
      os << std::get<Residue>(x.value).v;
      break;
    case 2: {
      const auto& m = std::get<ResidueVec>(x.value).c;
      os << "{";
      bool first = true;
      for (const auto& [k, v] : m) {
        if (!first) os << ", ";
        first = false;
        os << k << ":" << v;
      }
      os << "}";
      break;
    }
    case 3:
      os << rat_text(std::get<Rational>(x.value).v);
      break;
    case 4: {
      const auto& p = std::get<PruferVal>(x.value);
      os << "(" << p.a << ", " << p.i << ")";
      break;
    }
    case 5:
      os << rat_text(std::get<QuotClass>(x.value).v);
      break;
    case 6: {
      const auto& t = std::get<Tuple>(x.value);
      os << "(";
      for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ", ";
        os << element_text(t[i]);
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

}  // namespace cgc
