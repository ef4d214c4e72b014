#ifndef CGC_SPLITTING_HPP
#define CGC_SPLITTING_HPP

// Subgroup pairs (G, H) whose quotient is locally finite with all element
// orders odd, the unique balanced-coefficient decomposition
// g = h_g + sum r_i * g_i with r_i in [-k_i, k_i], and the explicit coarse
// maps built from it: the odd split G -> H + G/H, the transfer map between
// aligned pairs, the dyadic split of Z[1/2], finite powers, the composite
// split of Q, and sampled restrictions of embeddings into the even model
// space.

#include "cgc/chains.hpp"
#include "cgc/groups.hpp"
#include "cgc/norms.hpp"

#include <functional>
#include <map>
#include <memory>
#include <utility>

namespace cgc {

/// A subgroup H of an ambient group, with its own descriptor and norm plus
/// the two coordinate changes between ambient and subgroup representation.
struct SubgroupSpec {
  GroupDescriptor group;
  Metric metric;
  std::function<bool(const Element&)> contains;     // ambient-side test
  std::function<Element(const Element&)> to_sub;    // ambient -> H element
  std::function<Element(const Element&)> from_sub;  // H element -> ambient
};

/// A pair (G, H) with locally finite odd quotient: a chain on G/H with odd
/// indexes m_i = 2 k_i + 1, lifts g_i of its generators, the correction
/// terms h_{m_i g_i}, and an admissible scale sequence (strictly increasing
/// and at least the k_sequence_min lower bound at every level).
struct OddPairSpec {
  std::string name;
  GroupDescriptor ambient;
  SubgroupSpec sub;
  std::shared_ptr<OneStepChain> quotient_chain;
  std::vector<Element> lifts;
  std::vector<Int> half_indexes;
  std::vector<Element> corrections;  // H elements, one per level
  std::vector<Rat> scales;
  std::function<Element(const Element&)> project;      // ambient -> G/H
  std::function<long(const Element&)> quotient_level;  // -1 past the depth

  long depth() const { return static_cast<long>(lifts.size()); }
};

struct Decomposition {
  Element h;                   // element of the subgroup's own group
  std::map<long, Int> coeffs;  // level (1-based) -> nonzero r_i in [-k_i, k_i]

  long top() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
};

/// The unique decomposition of g over the pair, found top-down by solving
/// one balanced coset equation per level. Throws when g's quotient class
/// lies outside the materialized chain.
Decomposition decompose(const OddPairSpec& pair, const Element& g);

/// from_sub(h) + sum r_i * g_i; validates coefficient ranges.
Element recompose(const OddPairSpec& pair, const Decomposition& d);

/// Lower bound sum_{i<=n} (n-i+1) * ||corrections[i]||_H that any
/// admissible K_n must meet.
Rat k_sequence_min(const OddPairSpec& pair, long n);

/// ||h_x||_H + K_{top}(x); a proper norm on the ambient group.
Rat pseudo_ultrametric_norm(const OddPairSpec& pair, const Element& x);

Metric pair_metric(const OddPairSpec& pair);      // the norm above, as a Metric
Metric quotient_metric(const OddPairSpec& pair);  // chain ultrametric on G/H

/// The chain on G with G_0 = H obtained by pulling the quotient chain back
/// along the projection; its ultrametric is the pseudo-metric d_L (zero on
/// H-cosets).
OneStepChain derived_chain(const OddPairSpec& pair);

/// f(g) = (h_g, class of g): the coarse equivalence onto H + G/H.
std::pair<Element, Element> odd_split(const OddPairSpec& pair, const Element& g);

/// Section of odd_split: h + sum r_i * g_i with (r_i) the balanced digits
/// of q in the quotient chain. Exact two-sided inverse of odd_split.
Element odd_split_inverse(const OddPairSpec& pair, const Element& h,
                          const Element& q);

/// The bijective coarse equivalence between pairs with equal index
/// sequences: substitute B's lifts for A's and transport h through iso.
Element transfer(const OddPairSpec& A, const OddPairSpec& B,
                 const std::function<Element(const Element&)>& iso,
                 const Element& g);

/// Certified control constant at scale K:
/// C_K = K + K'_{i_K} + sum_{i<=i_K} (i_K - i + 1)(||h'_i|| + ||h_i||),
/// i_K the largest i with A's K_i <= K (0 when none, with K'_0 = 0).
Rat transfer_bound(const OddPairSpec& A, const OddPairSpec& B, const Rat& K);

// --- concrete pairs -------------------------------------------------------

/// 3, 3, 5, 3, 5, 7, ...: blocks listing the first j odd primes, so each
/// odd prime appears unboundedly often.
std::vector<Int> default_odd_schedule(long depth);

/// (Z[1/p], Z) for odd prime p: quotient is the p-Prufer group, lifts
/// 1/p^i. Empty scales mean the default K_n = max(bound_n, K_{n-1} + 1).
OddPairSpec make_localized_pair(const Int& p, long depth,
                                std::vector<Rat> scales = {});

/// The split extension (H + T, H) for an odd cyclic-sum T: lifts (0, e_i),
/// all corrections zero.
OddPairSpec make_split_sum_pair(const GroupDescriptor& h_group, Metric h_metric,
                                const GroupDescriptor& torsion, long depth,
                                std::vector<Rat> scales = {});

/// (Q, Z[1/2]): quotient classes are represented by odd-denominator
/// rationals in [0, 1); level i covers denominators dividing the schedule
/// product Q_i, with lifts 1/Q_i.
OddPairSpec make_rationals_over_dyadic_pair(std::vector<Int> schedule,
                                            std::vector<Rat> scales = {});

/// (Q/Z, Z(2^inf)): same odd-denominator quotient model, 2-power classes
/// as the subgroup.
OddPairSpec make_qmodz_over_prufer2_pair(std::vector<Int> schedule,
                                         std::vector<Rat> scales = {});

// --- dyadic splitting -----------------------------------------------------

/// f(x) = (m_x, x mod 1): integer part of the canonical form plus the
/// 2-power class.
std::pair<Int, PruferVal> dyadic_split(const Rat& x);

/// g(m, q) = m + k/2^i for m >= 0, m + (k - 2^i)/2^i for m < 0 (and m when
/// q = 0). Exact section: dyadic_split(dyadic_unsplit(m, q)) = (m, q);
/// the other way round moves only points of (-1, 0), by exactly +1.
Rat dyadic_unsplit(const Int& m, const PruferVal& q);

std::vector<std::pair<Int, PruferVal>> power_split(const std::vector<Rat>& xs);
std::vector<Rat> power_unsplit(const std::vector<std::pair<Int, PruferVal>>& ys);

// --- the composite split of Q ---------------------------------------------

/// Aligned pairs (Q, Z[1/2]) and (Q/Z, Z(2^inf)) over one odd schedule.
struct RationalSplitContext {
  OddPairSpec over_dyadic;
  OddPairSpec over_prufer;
};

RationalSplitContext make_rational_split_context(std::vector<Int> schedule);

/// F(x) = (z, q) with z the integer part of x's dyadic component and
/// q = x mod Z exactly; integers map to (x, 0).
std::pair<Int, QuotClass> rational_split(const RationalSplitContext& ctx,
                                         const Rat& x);

// --- restrictions of embeddings into the even model space ------------------

/// A homomorphism of a source group into K copies of Z[1/2] plus r2 copies
/// of Z(2^inf), given by generator images. images[part][j] is the image of
/// the part's j-th generator: basis vectors for integer parts, coordinate
/// generators for torsion parts, and the level-(j+1) generator (1/2^{j+1},
/// or its class) for Z[1/2] / Z(2^inf) parts, whose supplied levels must be
/// consistent under doubling.
struct EvenEmbedding {
  std::string name;
  GroupDescriptor source;
  size_t dyadic_copies = 0;
  size_t prufer_copies = 0;
  std::vector<std::vector<Element>> images;

  GroupDescriptor target() const;
};

struct EvenSplitRow {
  Element source;
  Element image;
  std::vector<std::pair<Int, PruferVal>> split;  // one per dyadic coordinate
};

struct EvenSplitReport {
  GroupDescriptor source;
  GroupDescriptor target;
  int bound = 0;
  bool section_exact = true;    // unsplit(split) fixed every image coordinate>=0 side
  Rat max_displacement = 0;     // per-coordinate round trip, should stay <= 1
  bool image_in_sum = true;     // every split row canonical in Z^K + quotients
  std::vector<EvenSplitRow> rows;

  bool pass() const { return section_exact && image_in_sum && max_displacement <= 1; }
};

/// Evaluates the embedding on enumerate_ball(source, bound), applies the
/// coordinatewise split, and checks the homomorphism relations of the
/// supplied images. Throws std::invalid_argument("...not a homomorphism on
/// sampled relations") when an order or doubling relation fails.
EvenSplitReport even_split_restrict(const EvenEmbedding& emb, int bound);

EvenEmbedding even_embedding_identity();   // Z[1/2] into itself, K = 1
EvenEmbedding even_embedding_integers();   // Z into Z[1/2]
EvenEmbedding even_embedding_diagonal();   // Z[1/2] -> (x, x), K = 2
EvenEmbedding even_embedding_bad_torsion();  // Z/2 -> 1/2: violates 2g = 0

}  // namespace cgc

#endif
