#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cgc/chains.hpp"
#include "cgc/text.hpp"

using namespace cgc;

TEST_CASE("scale rules combine a prefix with an affine continuation") {
  ScaleRule def;
  CHECK(def.at(1) == 1);
  CHECK(def.at(7) == 7);

  ScaleRule r = parse_scale_rule("1,2,4;+2");
  CHECK(r.at(1) == 1);
  CHECK(r.at(3) == 4);
  CHECK(r.at(4) == 6);
  CHECK(r.at(6) == 10);
  CHECK(r.strictly_increasing());

  ScaleRule plain = parse_scale_rule("3,5,9");
  CHECK(plain.at(3) == 9);
  CHECK(plain.at(5) == 11);  // step defaults to 1 past the prefix

  ScaleRule frac = parse_scale_rule("1/2,2;+3/2");
  CHECK(frac.at(1) == Rat(1, 2));
  CHECK(frac.at(4) == Rat(5));

  CHECK_FALSE(parse_scale_rule("3,1,5").strictly_increasing());
}

TEST_CASE("standard chains enumerate one generator per level") {
  auto G = GroupDescriptor::cyclic_sum({3, 5, 7});
  OneStepChain c = standard_chain(G);
  REQUIRE(c.depth() == 3);
  CHECK(c.indexes == std::vector<Int>{3, 5, 7});
  CHECK(c.covers_group);
  CHECK(c.scale_at(2) == 2);

  CHECK(c.level_of(identity(G)) == 0);
  Element e0 = parse_element(G, "{0:1}");
  Element e2 = parse_element(G, "{2:1}");
  CHECK(c.level_of(e0) == 1);
  CHECK(c.level_of(e2) == 3);
  CHECK(c.level_of(add(G, e0, e2)) == 3);
  CHECK(c.try_level(e2) == 3);
  CHECK(c.member(e0, 1));
  CHECK_FALSE(c.member(e2, 2));
}

TEST_CASE("single cyclic groups build one-level chains") {
  auto z4 = GroupDescriptor::cyclic(4);
  OneStepChain c = standard_chain(z4);
  REQUIRE(c.depth() == 1);
  CHECK(c.indexes == std::vector<Int>{4});
  CHECK(c.level_of(Element(Residue{2})) == 1);
}

TEST_CASE("scale validation rejects non-monotone sequences") {
  auto G = GroupDescriptor::cyclic_sum({3, 5, 7});
  CHECK_THROWS_WITH_AS(standard_chain(G, parse_scale_rule("3,1,5")),
                       "scale sequence must be positive and strictly increasing",
                       std::invalid_argument);
  CHECK_NOTHROW(standard_chain(G, parse_scale_rule("3,1,5"), 64, false));
}

TEST_CASE("prufer chains realize p-power classes level by level") {
  OneStepChain c = prufer_chain(2, 5);
  CHECK(c.depth() == 5);
  auto G = GroupDescriptor::prufer(2);
  CHECK(c.level_of(parse_element(G, "1/2")) == 1);
  CHECK(c.level_of(parse_element(G, "3/8")) == 3);
  CHECK(c.try_level(parse_element(G, "1/64")) == -1);  // past the materialized depth
  for (const Int& m : c.indexes) CHECK(m == 2);
}

TEST_CASE("rationals mod one chain orders denominators by growth") {
  OneStepChain c = rationals_mod_one_chain(8);
  auto G = GroupDescriptor::rationals_mod_one();
  CHECK(c.base == G);
  CHECK(c.depth() == 8);
  long l13 = c.level_of(parse_element(G, "1/3"));
  long l16 = c.level_of(parse_element(G, "1/6"));
  CHECK(l13 >= 1);
  CHECK(l16 >= l13);
  // levels nest: members of level L are members of every level above it
  Element x = parse_element(G, "3/4");
  long lx = c.level_of(x);
  CHECK(c.member(x, lx));
  CHECK(c.member(x, c.depth()));
  CHECK_FALSE(c.member(x, lx - 1));
}

TEST_CASE("ultrametric distance picks the minimal containing level") {
  auto G = GroupDescriptor::cyclic_sum({3, 5, 7});
  auto c = std::make_shared<OneStepChain>(standard_chain(G));
  Element e0 = parse_element(G, "{0:1}");
  Element e1 = parse_element(G, "{1:1}");
  CHECK(ultrametric_distance(*c, e0, e0) == 0);
  CHECK(ultrametric_distance(*c, e0, identity(G)) == 1);
  CHECK(ultrametric_distance(*c, e1, identity(G)) == 2);
  CHECK(ultrametric_distance(*c, e0, e1) == 2);

  // strong triangle inequality, exhaustively
  auto ball = enumerate_ball(G, 3);
  for (const auto& x : ball)
    for (const auto& y : ball)
      for (const auto& z : ball) {
        Rat xz = ultrametric_distance(*c, x, z);
        Rat xy = ultrametric_distance(*c, x, y);
        Rat yz = ultrametric_distance(*c, y, z);
        CHECK(xz <= std::max(xy, yz));
      }
}

TEST_CASE("prime refinement splits composite indexes in ascending order") {
  auto z4 = GroupDescriptor::cyclic(4);
  OneStepChain r4 = refine_to_prime(standard_chain(z4));
  CHECK(r4.indexes == std::vector<Int>{2, 2});
  REQUIRE(r4.gens.size() == 2);
  CHECK(r4.gens[0] == Element(Residue{2}));
  CHECK(r4.gens[1] == Element(Residue{1}));

  auto G = GroupDescriptor::cyclic_sum({4, 6});
  OneStepChain r = refine_to_prime(standard_chain(G));
  CHECK(r.indexes == std::vector<Int>{2, 2, 2, 3});

  // each refined level really has the stated index: |G_i| doubles/triples
  std::set<Element, ElementLess> prev{identity(G)};
  for (long lev = 1; lev <= r.depth(); ++lev) {
    std::set<Element, ElementLess> cur;
    for (const auto& ball : enumerate_ball(G, 2))
      if (r.member(ball, lev)) cur.insert(ball);
    CHECK(cur.size() == prev.size() * static_cast<size_t>(r.indexes[lev - 1]));
    prev = cur;
  }

  OneStepChain already = refine_to_prime(standard_chain(GroupDescriptor::cyclic_sum({3, 5})));
  CHECK(already.indexes == std::vector<Int>{3, 5});
}

TEST_CASE("standardization is an isometric bijection onto a prime sum") {
  auto G = GroupDescriptor::cyclic_sum({4, 6});
  Standardization st = standardize(G);
  CHECK(st.target == GroupDescriptor::cyclic_sum({2, 2, 2, 3}));

  auto all = enumerate_ball(G, 2);
  REQUIRE(all.size() == 24);
  std::set<Element, ElementLess> images;
  for (const auto& x : all) {
    Element y = st.forward(x);
    CHECK(belongs(st.target, y));
    CHECK(st.backward(y) == x);
    images.insert(y);
  }
  CHECK(images.size() == all.size());

  for (const auto& x : all)
    for (const auto& y : all)
      CHECK(ultrametric_distance(*st.refined, x, y) ==
            ultrametric_distance(*st.target_chain, st.forward(x), st.forward(y)));
}

TEST_CASE("chains refuse groups they cannot cover") {
  CHECK_THROWS_AS(standard_chain(GroupDescriptor::int_power(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(standard_chain(GroupDescriptor::rationals()),
                  std::invalid_argument);
}
