#ifndef CGC_GROUPS_HPP
#define CGC_GROUPS_HPP

// Countable abelian groups given by structural descriptors, with canonical
// element representations and exact arithmetic. Every element has exactly one
// representation, so equality is structural equality and serialization is
// byte-deterministic.

#include "cgc/numbers.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cgc {

enum class GroupKind {
  IntPower,         // Z^n, n >= 0
  Cyclic,           // Z/m, m >= 2
  CyclicSum,        // direct sum of Z/m_i, finite list or lazy continuation
  Localized,        // Z[1/p], denominators are powers of the prime p
  Prufer,           // Z(p^inf), classes a/p^i mod 1
  Rationals,        // Q
  RationalsModOne,  // Q/Z, classes in [0, 1)
  DirectSum,        // finite sum of the above, flattened on construction
};

enum class TailRule {
  None,       // finite list
  RepeatLast, // repeat the last explicit index forever
  CycleList,  // cycle through the explicit list forever
  OddPrimes,  // diagonal enumeration 3, 3, 5, 3, 5, 7, ... (each odd prime
              // appears unboundedly often)
};

class GroupDescriptor {
 public:
  GroupKind kind = GroupKind::IntPower;
  int rank_n = 0;                    // IntPower
  std::vector<Int> indexes;          // Cyclic (size 1) / CyclicSum prefix
  TailRule tail = TailRule::None;    // CyclicSum continuation
  Int prime = 0;                     // Localized / Prufer
  std::vector<GroupDescriptor> parts;  // DirectSum, flattened, size >= 1

  static GroupDescriptor int_power(int n);
  static GroupDescriptor cyclic(const Int& m);
  static GroupDescriptor cyclic_sum(std::vector<Int> ms, TailRule tail = TailRule::None);
  static GroupDescriptor localized(const Int& p);
  static GroupDescriptor prufer(const Int& p);
  static GroupDescriptor rationals();
  static GroupDescriptor rationals_mod_one();
  static GroupDescriptor direct_sum(std::vector<GroupDescriptor> parts);

  /// i-th cyclic index (0-based), following the continuation rule.
  /// Throws if the sum is finite and i is past the end.
  Int cyclic_index(size_t i) const;

  /// Number of cyclic coordinates, or nullopt when the sum is infinite.
  std::optional<size_t> cyclic_size() const;

  bool operator==(const GroupDescriptor& o) const;
  bool operator!=(const GroupDescriptor& o) const { return !(*this == o); }
};

// --- canonical element values ------------------------------------------

struct IntVec {
  std::vector<Int> c;  // size = descriptor rank
};

struct Residue {
  Int v;  // 0 <= v < m
};

// Finite-support vector of residues; key = coordinate (0-based), value
// nonzero and reduced mod that coordinate's index.
struct ResidueVec {
  std::map<long, Int> c;
};

struct Rational {
  Rat v;  // reduced; for Localized(p) the denominator is a power of p
};

// Class a/p^i mod 1 with 0 <= a < p^i, p coprime to a unless a = 0, i = 0.
struct PruferVal {
  Int a;
  unsigned i = 0;
};

// Class of a rational mod a dense subgroup, canonical representative in
// [0, 1). For Q/Z the denominator is arbitrary; quotients by a localization
// keep only denominators coprime to the inverted prime.
struct QuotClass {
  Rat v;
};

class Element;
using Tuple = std::vector<Element>;

class Element {
 public:
  std::variant<IntVec, Residue, ResidueVec, Rational, PruferVal, QuotClass, Tuple> value;

  Element() : value(IntVec{}) {}
  template <typename T>
  Element(T v) : value(std::move(v)) {}

  template <typename T>
  const T& as() const {
    if (!std::holds_alternative<T>(value))
      throw std::invalid_argument("element value does not match the expected group kind");
    return std::get<T>(value);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(value);
  }
};

/// Total order on elements of one group; deterministic enumeration and set
/// containers rely on it. Comparing values of different shapes orders by
/// variant index (only reachable when callers mix groups).
int compare(const Element& a, const Element& b);

struct ElementLess {
  bool operator()(const Element& a, const Element& b) const { return compare(a, b) < 0; }
};

inline bool operator==(const Element& a, const Element& b) { return compare(a, b) == 0; }
inline bool operator!=(const Element& a, const Element& b) { return compare(a, b) != 0; }

// --- group operations ---------------------------------------------------

Element identity(const GroupDescriptor& G);
bool is_identity(const GroupDescriptor& G, const Element& x);

/// Exact sum in canonical form. Throws std::invalid_argument when an operand
/// does not belong to G (wrong shape, wrong denominator class, ...).
Element add(const GroupDescriptor& G, const Element& a, const Element& b);
Element negate(const GroupDescriptor& G, const Element& a);
Element sub(const GroupDescriptor& G, const Element& a, const Element& b);

/// n * x by doubling (n may be negative or zero).
Element scalar_mul(const GroupDescriptor& G, const Int& n, const Element& x);

/// True iff x is a structurally valid canonical element of G.
bool belongs(const GroupDescriptor& G, const Element& x);

/// Deterministic finite truncation, ascending in the canonical element
/// order, monotone in B:
///   Z^n        all vectors with every |coordinate| <= B
///   Z/m        all m residues
///   CyclicSum  full product of the first B coordinates
///   Z[1/p]     reduced a/p^k with p^k <= B and |a/p^k| <= B
///   Q          reduced a/b with b <= B and |a/b| <= B
///   Z(p^inf)   classes a/p^i with i <= B
///   Q/Z        classes a/b in [0,1) with b <= B
///   Sum        cartesian product of part truncations
/// Throws when the truncation would exceed size_cap elements.
std::vector<Element> enumerate_ball(const GroupDescriptor& G, int B, size_t size_cap = 500000);

// --- structural invariants ----------------------------------------------

struct InvariantRecord {
  std::optional<long> torsion_free_rank;  // nullopt = infinite
  bool finitely_generated = false;
  std::optional<long> cd_q;    // undefined when rank is infinite
  std::optional<long> asdim;   // equals the rank when finite
};

/// Torsion-free rank dim_Q(G tensor Q), computed structurally.
std::optional<long> torsion_free_rank(const GroupDescriptor& G);
bool is_finitely_generated(const GroupDescriptor& G);
bool is_locally_finite(const GroupDescriptor& G);
InvariantRecord invariants(const GroupDescriptor& G);

}  // namespace cgc

#endif
