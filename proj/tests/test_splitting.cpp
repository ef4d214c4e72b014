#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgc/splitting.hpp"
#include "cgc/text.hpp"

#include <map>
#include <set>

using namespace cgc;

namespace {

Element rat_elem(const Rat& v) { return Element{Rational{v}}; }
Element int_elem(const Int& v) { return Element{IntVec{{v}}}; }

// All recompositions with |h| <= h_bound and coefficients over the first
// `levels` levels, keyed by the ambient element they produce.
std::map<Element, Decomposition, ElementLess> all_recompositions(
    const OddPairSpec& pair, int h_bound, long levels) {
  std::vector<Element> hs;
  if (pair.sub.group.kind == GroupKind::IntPower) {
    for (int a = -h_bound; a <= h_bound; ++a) hs.push_back(int_elem(a));
  } else {
    hs = enumerate_ball(pair.sub.group, h_bound);
  }
  std::vector<std::map<long, Int>> combos{{}};
  for (long lev = 1; lev <= levels; ++lev) {
    const Int& k = pair.half_indexes[static_cast<size_t>(lev - 1)];
    std::vector<std::map<long, Int>> next;
    for (const auto& base : combos)
      for (Int r = -k; r <= k; ++r) {
        auto c = base;
        if (r != 0) c[lev] = r;
        next.push_back(std::move(c));
      }
    combos = std::move(next);
  }
  std::map<Element, Decomposition, ElementLess> out;
  for (const Element& h : hs)
    for (const auto& c : combos) {
      Decomposition d;
      d.h = h;
      d.coeffs = c;
      Element g = recompose(pair, d);
      // uniqueness: no two valid assignments may collide
      CHECK(out.emplace(g, d).second);
    }
  return out;
}

}  // namespace

TEST_CASE("default odd schedule lists prime blocks diagonally") {
  CHECK(default_odd_schedule(1) == std::vector<Int>{3});
  CHECK(default_odd_schedule(6) == std::vector<Int>{3, 3, 5, 3, 5, 7});
  CHECK(default_odd_schedule(10) ==
        std::vector<Int>{3, 3, 5, 3, 5, 7, 3, 5, 7, 11});
}

TEST_CASE("localized pair: corrections, scales, and the frozen decomposition") {
  OddPairSpec pair = make_localized_pair(3, 3);
  CHECK(pair.depth() == 3);
  CHECK(pair.half_indexes == std::vector<Int>{1, 1, 1});
  // 3 * (1/3) = 1 contributes the only nonzero correction
  CHECK(pair.corrections[0] == int_elem(1));
  CHECK(pair.corrections[1] == int_elem(0));
  CHECK(pair.corrections[2] == int_elem(0));
  CHECK(pair.scales == std::vector<Rat>{1, 2, 3});

  Decomposition d = decompose(pair, rat_elem(Rat(5, 9)));
  CHECK(d.h == int_elem(1));
  std::map<long, Int> expected{{1, Int(-1)}, {2, Int(-1)}};
  CHECK(d.coeffs == expected);
  CHECK(d.top() == 2);
  CHECK(recompose(pair, d) == rat_elem(Rat(5, 9)));

  Decomposition id = decompose(pair, rat_elem(Rat(0)));
  CHECK(id.h == int_elem(0));
  CHECK(id.coeffs.empty());

  Decomposition bad;
  bad.h = int_elem(0);
  bad.coeffs[1] = 2;  // k_1 = 1
  CHECK_THROWS_AS(recompose(pair, bad), std::invalid_argument);
  CHECK_THROWS_AS(decompose(pair, rat_elem(Rat(1, 81))), std::runtime_error);
  CHECK_THROWS_AS(decompose(pair, int_elem(1)), std::invalid_argument);

  CHECK_THROWS_AS(make_localized_pair(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_localized_pair(9, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_localized_pair(3, 0), std::invalid_argument);
}

TEST_CASE("admissible scale sequences are checked against the lower bound") {
  CHECK_NOTHROW(make_localized_pair(3, 3, {2, 4, 8}));
  // K_3 not strictly above K_2
  CHECK_THROWS_WITH_AS(make_localized_pair(3, 3, {1, 2, 2}),
                       doctest::Contains("inadmissible scale sequence"),
                       std::invalid_argument);
  // K_1 below the correction bound 1
  CHECK_THROWS_AS(make_localized_pair(3, 3, {Rat(1, 2), 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_localized_pair(3, 3, {1, 2}), std::invalid_argument);
}

TEST_CASE("decomposition is unique over enumerated coefficient assignments") {
  OddPairSpec loc = make_localized_pair(3, 2);
  auto table = all_recompositions(loc, 4, 2);
  CHECK(table.size() == 9 * 9);
  for (const auto& [g, d] : table) {
    Decomposition found = decompose(loc, g);
    CHECK(found.h == d.h);
    CHECK(found.coeffs == d.coeffs);
  }

  OddPairSpec rat = make_rationals_over_dyadic_pair({3, 3});
  auto table2 = all_recompositions(rat, 2, 2);
  CHECK(table2.size() == 9 * 9);
  for (const auto& [g, d] : table2) {
    Decomposition found = decompose(rat, g);
    CHECK(found.h == d.h);
    CHECK(found.coeffs == d.coeffs);
  }
}

TEST_CASE("rationals over the dyadics: frozen oracles") {
  OddPairSpec pair = make_rationals_over_dyadic_pair({3, 3});
  CHECK(pair.corrections[0] == rat_elem(Rat(1)));
  CHECK(pair.corrections[1] == rat_elem(Rat(0)));
  CHECK(pair.scales == std::vector<Rat>{1, 2});

  Decomposition d = decompose(pair, rat_elem(Rat(5, 6)));
  CHECK(d.h == rat_elem(Rat(1, 2)));
  std::map<long, Int> expected{{1, Int(1)}};
  CHECK(d.coeffs == expected);
  CHECK(recompose(pair, d) == rat_elem(Rat(5, 6)));

  auto [h, q] = odd_split(pair, rat_elem(Rat(5, 6)));
  CHECK(h == rat_elem(Rat(1, 2)));
  CHECK(q == Element{QuotClass{Rat(1, 3)}});
  CHECK(odd_split_inverse(pair, h, q) == rat_elem(Rat(5, 6)));
  CHECK(odd_split_inverse(pair, rat_elem(Rat(1, 4)), Element{QuotClass{Rat(0)}}) ==
        rat_elem(Rat(1, 4)));

  // f restricted to H is the identity: odd_split(i(h)) = (h, 0)
  auto [h2, q2] = odd_split(pair, rat_elem(Rat(-7, 4)));
  CHECK(h2 == rat_elem(Rat(-7, 4)));
  CHECK(q2 == Element{QuotClass{Rat(0)}});

  CHECK(pseudo_ultrametric_norm(pair, rat_elem(Rat(5, 6))) == 2);
  CHECK(pseudo_ultrametric_norm(pair, rat_elem(Rat(7, 2))) == 4);
  CHECK(pseudo_ultrametric_norm(pair, rat_elem(Rat(0))) == 0);

  CHECK_THROWS_AS(make_rationals_over_dyadic_pair({}), std::invalid_argument);
  CHECK_THROWS_AS(odd_split_inverse(pair, Element{QuotClass{Rat(1, 3)}},
                                    Element{QuotClass{Rat(0)}}),
                  std::invalid_argument);
}

TEST_CASE("k sequence lower bounds") {
  OddPairSpec loc = make_localized_pair(3, 3);
  CHECK(k_sequence_min(loc, 1) == 1);
  CHECK(k_sequence_min(loc, 2) == 2);
  CHECK(k_sequence_min(loc, 3) == 3);

  Metric z_word = word_metric(GroupDescriptor::int_power(1),
                              {int_elem(1), int_elem(-1)});
  OddPairSpec split = make_split_sum_pair(
      GroupDescriptor::int_power(1), z_word,
      GroupDescriptor::cyclic_sum({3}, TailRule::RepeatLast), 3);
  CHECK(k_sequence_min(split, 1) == 0);
  CHECK(k_sequence_min(split, 3) == 0);

  OddPairSpec rat = make_rationals_over_dyadic_pair({3, 3});
  CHECK(k_sequence_min(rat, 2) == 2);

  CHECK_THROWS_AS(k_sequence_min(loc, 0), std::invalid_argument);
  CHECK_THROWS_AS(k_sequence_min(loc, 4), std::invalid_argument);
}

TEST_CASE("split extension pair has trivial corrections") {
  Metric z_word = word_metric(GroupDescriptor::int_power(1),
                              {int_elem(1), int_elem(-1)});
  GroupDescriptor torsion = GroupDescriptor::cyclic_sum({3}, TailRule::RepeatLast);
  OddPairSpec pair =
      make_split_sum_pair(GroupDescriptor::int_power(1), z_word, torsion, 3);
  for (const Element& h : pair.corrections)
    CHECK(is_identity(pair.sub.group, h));
  CHECK(pair.scales == std::vector<Rat>{1, 2, 3});

  Element g = add(pair.ambient, pair.sub.from_sub(int_elem(5)), pair.lifts[0]);
  Decomposition d = decompose(pair, g);
  CHECK(d.h == int_elem(5));
  std::map<long, Int> expected{{1, Int(1)}};
  CHECK(d.coeffs == expected);
  CHECK(pseudo_ultrametric_norm(pair, g) == 6);

  CHECK_THROWS_AS(
      make_split_sum_pair(
          GroupDescriptor::direct_sum({GroupDescriptor::int_power(1),
                                       GroupDescriptor::int_power(1)}),
          z_word, torsion, 2),
      std::invalid_argument);
}

TEST_CASE("transfer between aligned pairs substitutes lifts") {
  Metric z_word = word_metric(GroupDescriptor::int_power(1),
                              {int_elem(1), int_elem(-1)});
  OddPairSpec A = make_split_sum_pair(
      GroupDescriptor::int_power(1), z_word,
      GroupDescriptor::cyclic_sum({3}, TailRule::RepeatLast), 3);
  OddPairSpec B = make_localized_pair(3, 3);
  auto id = [](const Element& e) { return e; };

  Element g1 = add(A.ambient, A.sub.from_sub(int_elem(5)), A.lifts[0]);
  CHECK(transfer(A, B, id, g1) == rat_elem(Rat(16, 3)));

  Element g2 = scalar_mul(A.ambient, 2, A.lifts[0]);  // residue 2 = -1 mod 3
  CHECK(transfer(A, B, id, g2) == rat_elem(Rat(-1, 3)));

  CHECK(transfer(A, B, id, A.sub.from_sub(int_elem(7))) == rat_elem(Rat(7)));
  CHECK(transfer(B, A, id, rat_elem(Rat(16, 3))) == g1);
  CHECK(transfer(A, A, id, g1) == g1);

  // two-sided inverse and injectivity over a depth-2 sample
  std::set<Element, ElementLess> images;
  for (int h = -2; h <= 2; ++h)
    for (int r1 = -1; r1 <= 1; ++r1)
      for (int r2 = -1; r2 <= 1; ++r2) {
        Decomposition d;
        d.h = int_elem(h);
        if (r1 != 0) d.coeffs[1] = r1;
        if (r2 != 0) d.coeffs[2] = r2;
        Element g = recompose(A, d);
        Element t = transfer(A, B, id, g);
        CHECK(transfer(B, A, id, t) == g);
        CHECK(images.insert(t).second);
      }

  OddPairSpec other = make_localized_pair(5, 2);
  CHECK_THROWS_WITH_AS(transfer(A, other, id, g1),
                       doctest::Contains("different index sequences"),
                       std::invalid_argument);

  OddPairSpec shallow = make_localized_pair(3, 2);
  Decomposition deep;
  deep.h = int_elem(0);
  deep.coeffs[3] = 1;
  CHECK_THROWS_AS(transfer(A, shallow, id, recompose(A, deep)),
                  std::runtime_error);
}

TEST_CASE("transfer bound constants and the measured control") {
  Metric z_word = word_metric(GroupDescriptor::int_power(1),
                              {int_elem(1), int_elem(-1)});
  OddPairSpec A = make_split_sum_pair(
      GroupDescriptor::int_power(1), z_word,
      GroupDescriptor::cyclic_sum({3}, TailRule::RepeatLast), 3);
  OddPairSpec B = make_localized_pair(3, 3);
  auto id = [](const Element& e) { return e; };

  CHECK(transfer_bound(A, B, 1) == 3);
  CHECK(transfer_bound(A, B, 2) == 6);
  CHECK(transfer_bound(A, B, 3) == 9);
  CHECK(transfer_bound(A, B, Rat(1, 2)) == Rat(1, 2));  // below every scale
  CHECK(transfer_bound(A, A, Rat(1, 2)) == Rat(1, 2));

  Metric dA = pair_metric(A), dB = pair_metric(B);
  std::vector<Element> sample;
  std::vector<Element> mapped;
  for (int h = -2; h <= 2; ++h)
    for (int r1 = -1; r1 <= 1; ++r1)
      for (int r2 = -1; r2 <= 1; ++r2) {
        Decomposition d;
        d.h = int_elem(h);
        if (r1 != 0) d.coeffs[1] = r1;
        if (r2 != 0) d.coeffs[2] = r2;
        sample.push_back(recompose(A, d));
        mapped.push_back(transfer(A, B, id, sample.back()));
      }
  for (Rat K : {Rat(1), Rat(2), Rat(3)}) {
    Rat C = transfer_bound(A, B, K);
    for (size_t i = 0; i < sample.size(); ++i)
      for (size_t j = i + 1; j < sample.size(); ++j)
        if (dA.distance(sample[i], sample[j]) <= K)
          CHECK(dB.distance(mapped[i], mapped[j]) <= C);
  }
}

TEST_CASE("derived chain measures only the quotient") {
  OddPairSpec pair = make_localized_pair(3, 3);
  OneStepChain c = derived_chain(pair);
  CHECK(c.depth() == 3);
  // distance is insensitive to subgroup moves: a pseudo metric on cosets
  CHECK(ultrametric_distance(c, rat_elem(Rat(5, 9)), rat_elem(Rat(14, 9))) == 0);
  CHECK(ultrametric_distance(c, rat_elem(Rat(0)), rat_elem(Rat(1, 3))) == 1);
  CHECK(ultrametric_distance(c, rat_elem(Rat(0)), rat_elem(Rat(5, 9))) == 2);
  CHECK(quotient_metric(pair).distance(Element{PruferVal{1, 1}},
                                       Element{PruferVal{0, 0}}) == 1);
}

TEST_CASE("dyadic split and its section") {
  auto s1 = dyadic_split(Rat(5));
  CHECK(s1.first == 5);
  CHECK(s1.second.a == 0);
  CHECK(s1.second.i == 0);

  auto s2 = dyadic_split(Rat(5, 8));
  CHECK(s2.first == 0);
  CHECK(s2.second.a == 5);
  CHECK(s2.second.i == 3);

  auto s3 = dyadic_split(Rat(-11, 4));
  CHECK(s3.first == -2);
  CHECK(s3.second.a == 1);
  CHECK(s3.second.i == 2);

  CHECK(dyadic_unsplit(5, PruferVal{0, 0}) == Rat(5));
  CHECK(dyadic_unsplit(0, PruferVal{1, 2}) == Rat(1, 4));
  CHECK(dyadic_unsplit(-2, PruferVal{1, 2}) == Rat(-11, 4));

  // split after unsplit is the identity on canonical pairs
  for (int m = -4; m <= 4; ++m)
    for (PruferVal q : {PruferVal{0, 0}, PruferVal{1, 1}, PruferVal{1, 2},
                        PruferVal{3, 2}, PruferVal{7, 3}}) {
      auto back = dyadic_split(dyadic_unsplit(m, q));
      CHECK(back.first == m);
      CHECK(back.second.a == q.a);
      CHECK(back.second.i == q.i);
    }

  // unsplit after split moves exactly the open interval (-1, 0), by +1
  for (const Element& e : enumerate_ball(GroupDescriptor::localized(2), 8)) {
    const Rat& x = e.as<Rational>().v;
    auto [m, q] = dyadic_split(x);
    Rat back = dyadic_unsplit(m, q);
    CHECK(dyadic_norm(back - x) <= 1);
    if (x > -1 && x < 0)
      CHECK(back == x + 1);
    else
      CHECK(back == x);
  }
}

TEST_CASE("power split acts componentwise") {
  auto ys = power_split({Rat(5, 8), Rat(-11, 4)});
  REQUIRE(ys.size() == 2);
  CHECK(ys[0].first == 0);
  CHECK(ys[0].second.a == 5);
  CHECK(ys[0].second.i == 3);
  CHECK(ys[1].first == -2);
  CHECK(ys[1].second.a == 1);
  CHECK(ys[1].second.i == 2);

  auto zs = power_split({Rat(0), Rat(0)});
  CHECK(zs[0].first == 0);
  CHECK(zs[0].second.a == 0);
  CHECK(zs[1].first == 0);

  CHECK(power_unsplit(ys) == std::vector<Rat>{Rat(5, 8), Rat(-11, 4)});
  CHECK(power_unsplit(power_split({Rat(-1, 2), Rat(3, 4)})) ==
        std::vector<Rat>{Rat(1, 2), Rat(3, 4)});
}

TEST_CASE("composite split of the rationals") {
  RationalSplitContext ctx = make_rational_split_context({3, 3});

  auto r1 = rational_split(ctx, Rat(5));
  CHECK(r1.first == 5);
  CHECK(r1.second.v == 0);

  auto r2 = rational_split(ctx, Rat(1, 3));
  CHECK(r2.first == 0);
  CHECK(r2.second.v == Rat(1, 3));

  auto r3 = rational_split(ctx, Rat(7, 2));
  CHECK(r3.first == 3);
  CHECK(r3.second.v == Rat(1, 2));

  auto r4 = rational_split(ctx, Rat(5, 6));
  CHECK(r4.first == 0);
  CHECK(r4.second.v == Rat(5, 6));

  // the second component is the quotient projection, exactly
  for (Int d : {1, 2, 3, 4, 6, 8, 9, 12, 18, 24, 36, 72})
    for (Int a = -2 * d; a <= 2 * d; ++a) {
      Rat x(a, d);
      auto [z, q] = rational_split(ctx, x);
      CHECK(q.v == mod_one(x));
      if (is_integer(x)) {
        CHECK(z == x);
        CHECK(q.v == 0);
      }
    }
}

TEST_CASE("quotient classes over the 2-power subgroup") {
  OddPairSpec pair = make_qmodz_over_prufer2_pair({3});
  auto [h, q] = odd_split(pair, Element{QuotClass{Rat(5, 6)}});
  CHECK(h == Element{PruferVal{1, 1}});
  CHECK(q == Element{QuotClass{Rat(1, 3)}});
  CHECK(odd_split_inverse(pair, h, q) == Element{QuotClass{Rat(5, 6)}});

  Decomposition d = decompose(pair, Element{QuotClass{Rat(1, 3)}});
  CHECK(d.h == Element{PruferVal{0, 0}});
  std::map<long, Int> expected{{1, Int(1)}};
  CHECK(d.coeffs == expected);

  CHECK_THROWS_AS(make_qmodz_over_prufer2_pair({}), std::invalid_argument);
}

TEST_CASE("even split fixtures") {
  EvenSplitReport identity_report =
      even_split_restrict(even_embedding_identity(), 4);
  CHECK(identity_report.pass());
  CHECK(identity_report.section_exact);
  CHECK(identity_report.image_in_sum);
  CHECK(identity_report.max_displacement == 1);
  CHECK(identity_report.rows.size() ==
        enumerate_ball(GroupDescriptor::localized(2), 4).size());
  for (const EvenSplitRow& row : identity_report.rows) {
    REQUIRE(row.split.size() == 1);
    auto direct = dyadic_split(row.image.as<Rational>().v);
    CHECK(row.split[0].first == direct.first);
    CHECK(row.split[0].second == Element{direct.second});
  }

  EvenSplitReport int_report =
      even_split_restrict(even_embedding_integers(), 5);
  CHECK(int_report.pass());
  CHECK(int_report.max_displacement == 0);
  for (const EvenSplitRow& row : int_report.rows)
    CHECK(row.split[0].second.i == 0);

  EvenSplitReport diag_report =
      even_split_restrict(even_embedding_diagonal(), 4);
  CHECK(diag_report.pass());
  CHECK(diag_report.max_displacement == 1);
  for (const EvenSplitRow& row : diag_report.rows) {
    REQUIRE(row.split.size() == 2);
    CHECK(row.split[0].first == row.split[1].first);
    CHECK(row.split[0].second == Element{row.split[1].second});
  }

  CHECK_THROWS_WITH_AS(
      even_split_restrict(even_embedding_bad_torsion(), 2),
      doctest::Contains("not a homomorphism on sampled relations"),
      std::invalid_argument);

  // inconsistent level images: doubling 1/2 does not give 1/2
  EvenEmbedding bad;
  bad.name = "bad-doubling";
  bad.source = GroupDescriptor::localized(2);
  bad.dyadic_copies = 1;
  bad.images = {{Element{Rational{Rat(1, 2)}}, Element{Rational{Rat(1, 2)}}}};
  CHECK_THROWS_WITH_AS(even_split_restrict(bad, 2),
                       doctest::Contains("inconsistent under doubling"),
                       std::invalid_argument);

  EvenEmbedding twocol = even_embedding_integers();
  twocol.images.push_back({int_elem(1)});
  CHECK_THROWS_WITH_AS(even_split_restrict(twocol, 2),
                       doctest::Contains("one image column per source part"),
                       std::invalid_argument);
}
