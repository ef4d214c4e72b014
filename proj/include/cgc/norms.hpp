#ifndef CGC_NORMS_HPP
#define CGC_NORMS_HPP

// Proper invariant norms and the metrics they induce: word norms by
// breadth-first search, the explicit dyadic norm on Z[1/2] with its
// three-case carry term, Prufer norms, chain ultrametrics, and l1 sums.
// All values are exact rationals.

#include "cgc/chains.hpp"
#include "cgc/groups.hpp"

#include <functional>
#include <memory>
#include <string>

namespace cgc {

/// Canonical additive form of a dyadic rational: x = m + k / 2^i with
/// m = x, k = 0, i = 0 for integers, and otherwise m the integer part
/// truncated toward zero, k odd with sign(k) = sign(x - m), i >= 1.
struct DyadicForm {
  Int m;
  Int k;
  unsigned i = 0;
};

DyadicForm dyadic_form(const Rat& x);  // throws unless the denominator is a power of 2

/// |x| for integers, |m_x| + i_x otherwise.
Int dyadic_norm(const Rat& x);

/// Carry term of the sum x + y: -1, 0 or 1 by the sign pattern of the
/// integer and fractional parts. Satisfies
/// depth(x, y) + |delta| <= i_x + i_y whenever k_x, k_y != 0.
int dyadic_delta(const Rat& x, const Rat& y);

/// i_{x,y} = max of the fractional depths, counting only non-integer operands.
unsigned dyadic_pair_depth(const Rat& x, const Rat& y);

/// Minimal n with 2^n * x = 0; the exponent of the canonical form.
unsigned prufer_norm(const PruferVal& x);

/// An invariant metric presented through its norm: d(a, b) = ||a - b||.
struct Metric {
  GroupDescriptor group;
  std::string name;
  std::function<Rat(const Element&)> norm;

  Rat distance(const Element& a, const Element& b) const {
    return norm(sub(group, a, b));
  }
};

/// Shortest product length over a finite symmetric generating list, by
/// breadth-first search precomputed out to radius_cap (elements further out
/// raise an error). When the list is exactly the signed standard basis of
/// Z^n the closed l1 form is used and the cap does not apply.
Metric word_metric(const GroupDescriptor& G, std::vector<Element> gens,
                   long radius_cap = 64);

Metric dyadic_metric();  // on Z[1/2]

/// ||x|| = K_i for the canonical exponent i; default scales K_i = i.
Metric prufer_metric(const Int& p, ScaleRule scale = {});

/// Ultrametric of a one-step chain, as a Metric over its base group.
Metric chain_metric(std::shared_ptr<const OneStepChain> chain);

/// l1 sum on the direct sum of the component groups (none of which may
/// itself be a direct sum, to keep tuple coordinates unambiguous).
Metric sum_metric(std::vector<Metric> parts);

}  // namespace cgc

#endif
