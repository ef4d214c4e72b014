#ifndef CGC_CHAINS_HPP
#define CGC_CHAINS_HPP

// One-step ascending chains: towers {0} = G_0 < G_1 < G_2 < ... where each
// G_k is generated over G_{k-1} by a single generator of finite relative
// order m_k >= 2, together with a strictly increasing unbounded scale
// sequence K_k. The induced ultrametric d(x, y) = K_L, L minimal with
// x - y in G_L, is a proper invariant metric whenever the scales are valid.

#include "cgc/groups.hpp"

#include <functional>
#include <memory>

namespace cgc {

/// Scale sequence: explicit prefix, then affine continuation
/// K_{len+j} = prefix.back() + j * step. Default (empty prefix, step 1)
/// is K_i = i.
struct ScaleRule {
  std::vector<Rat> prefix;
  Rat step = 1;

  Rat at(long i) const;  // 1-based
  bool strictly_increasing() const;
};

ScaleRule parse_scale_rule(const std::string& text);  // "1,2,4" or "1,2,4;+2"

struct OneStepChain {
  GroupDescriptor base;
  std::vector<Element> gens;    // g_1 .. g_D (materialized)
  std::vector<Int> indexes;     // indexes[k] = order of gens[k] over level k
  ScaleRule scale;
  bool covers_group = false;    // every element of base lies in some level

  // Sorted level sets G_0 .. G_D; empty when a level hint serves instead.
  std::vector<std::vector<Element>> levels;
  // Minimal level of an element, or -1 when past the materialized depth.
  std::function<long(const Element&)> level_hint;

  long depth() const { return static_cast<long>(gens.size()); }
  Rat scale_at(long L) const { return scale.at(L); }

  /// Minimal L with x in G_L, or -1 when x falls outside every
  /// materialized level.
  long try_level(const Element& x) const;

  /// As try_level, but an element outside the materialization throws
  /// (under-materialized chain).
  long level_of(const Element& x) const;
  bool member(const Element& x, long L) const;
};

/// Natural chain of a locally finite descriptor: cyclic coordinates one at a
/// time (Cyclic, CyclicSum, direct sums of such; for a direct sum every part
/// before the last must be finite). Materializes at most depth_cap steps.
OneStepChain standard_chain(const GroupDescriptor& G, ScaleRule scale = {},
                            long depth_cap = 64, bool validate_scales = true);

/// The chain 0 < Z/p < Z/p^2 < ... inside Prufer(p), generator class(1/p^k).
OneStepChain prufer_chain(const Int& p, long depth, ScaleRule scale = {},
                          bool validate_scales = true);

/// The factorial chain of Q/Z: generator class(1/(k+1)!), index k+1.
OneStepChain rationals_mod_one_chain(long depth, ScaleRule scale = {},
                                     bool validate_scales = true);

/// Splits every composite step into prime steps, factors in ascending order:
/// a step of index m = p_1 ... p_t with generator g becomes the t steps with
/// generators (m / (p_1 ... p_k)) * g and indexes p_k. Level sets are
/// materialized and every refined quotient's order is verified; refinement
/// stops early when the next level set would exceed max_level_size.
OneStepChain refine_to_prime(const OneStepChain& c, ScaleRule scale = {},
                             size_t max_level_size = 5000);

/// d(x, y) = K_L for the minimal L with x - y in G_L; 0 when x = y.
Rat ultrametric_distance(const OneStepChain& c, const Element& a, const Element& b);

struct Standardization {
  GroupDescriptor target;            // CyclicSum with prime indexes
  std::shared_ptr<OneStepChain> refined;   // chain on the source group
  std::shared_ptr<OneStepChain> target_chain;
  std::function<Element(const Element&)> forward;   // exact isometry on the
  std::function<Element(const Element&)> backward;  // materialized levels
};

/// Rewrites a locally finite group as a sum of prime-order cyclic groups via
/// its refined chain; forward/backward are mutually inverse and carry the
/// chain ultrametric (scales K_i = i on both sides) to the standard one.
Standardization standardize(const GroupDescriptor& G, size_t max_level_size = 5000);

}  // namespace cgc

#endif
