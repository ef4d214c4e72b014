#ifndef CGC_NUMBERS_HPP
#define CGC_NUMBERS_HPP

// Exact arithmetic aliases and small number-theory helpers shared by every
// module. All values the library computes are cpp_int / cpp_rational; no
// floating point is used anywhere in the algebraic core.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace cgc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int int_pow(Int base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline Int int_abs(const Int& v) { return v < 0 ? Int(-v) : v; }
inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Floor division; the building block for all canonical representatives.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Int rat_floor(const Rat& q) { return floor_div(num(q), den(q)); }

// Truncation toward zero: the integer part of a canonical dyadic form.
inline Int rat_trunc(const Rat& q) { return num(q) / den(q); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

// q reduced to [0, 1): the canonical representative of q mod Z.
inline Rat mod_one(const Rat& q) { return q - Rat(rat_floor(q)); }

inline bool is_prime(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Ascending prime factorization with multiplicity; m >= 2.
inline std::vector<Int> prime_factors(Int m) {
  if (m < 2) throw std::invalid_argument("prime_factors: argument must be >= 2");
  std::vector<Int> out;
  for (Int d = 2; d * d <= m; ++d)
    while (m % d == 0) {
      out.push_back(d);
      m /= d;
    }
  if (m > 1) out.push_back(m);
  return out;
}

// True iff v = p^k for some k >= 0.
inline bool is_power_of(Int v, const Int& p) {
  if (v < 1) return false;
  while (v % p == 0) v /= p;
  return v == 1;
}

// Largest d with p^d | v (v != 0).
inline unsigned p_adic_valuation(Int v, const Int& p) {
  unsigned e = 0;
  v = int_abs(v);
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

// Modular inverse of a mod m (gcd(a, m) = 1).
inline Int mod_inverse(Int a, const Int& m) {
  Int t = 0, new_t = 1, r = m, new_r = a % m;
  if (new_r < 0) new_r += m;
  while (new_r != 0) {
    Int q = r / new_r;
    Int tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
  if (t < 0) t += m;
  return t;
}

// Prints "a/b" with the denominator always explicit, the canonical text form
// for every exact rational the tool emits.
inline std::string rat_text(const Rat& q) {
  return num(q).str() + "/" + den(q).str();
}

}  // namespace cgc

#endif
