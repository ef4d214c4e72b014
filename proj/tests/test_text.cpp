#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgc/groups.hpp"
#include "cgc/text.hpp"

using namespace cgc;

TEST_CASE("descriptor texts round-trip through the parser") {
  for (const char* text : {
           "Z", "Z^2", "Z^0", "Z/4", "CyclicSum([3, 5, 7])",
           "CyclicSum([3]; repeat-last)", "CyclicSum([3, 5]; cycle)",
           "CyclicSum([3]; odd-primes)", "Z[1/2]", "Z[1/3]", "Prufer(2)", "Q",
           "Q/Z", "Sum(Z, Q/Z)", "Sum(Z, CyclicSum([3]; repeat-last))",
       }) {
    GroupDescriptor g = parse_descriptor(text);
    CHECK(descriptor_text(g) == text);
    CHECK(parse_descriptor(descriptor_text(g)) == g);
  }
  CHECK(parse_descriptor("Z^1") == GroupDescriptor::int_power(1));
  CHECK(descriptor_text(GroupDescriptor::int_power(1)) == "Z");
  CHECK(parse_descriptor("Z(2^inf)") == GroupDescriptor::prufer(2));
}

TEST_CASE("descriptor parser accepts loose spacing") {
  CHECK(parse_descriptor(" Sum( Z^2 , Prufer(3) ) ") ==
        GroupDescriptor::direct_sum({GroupDescriptor::int_power(2),
                                     GroupDescriptor::prufer(3)}));
  CHECK(parse_descriptor("CyclicSum([3,5,7])") ==
        GroupDescriptor::cyclic_sum({3, 5, 7}));
}

TEST_CASE("descriptor parser rejects malformed input with positions") {
  CHECK_THROWS_AS(parse_descriptor(""), ParseError);
  CHECK_THROWS_AS(parse_descriptor("Z["), ParseError);
  CHECK_THROWS_AS(parse_descriptor("Z[1/4]"), ParseError);  // 4 is not prime
  CHECK_THROWS_AS(parse_descriptor("Prufer(6)"), ParseError);
  CHECK_THROWS_AS(parse_descriptor("Z/1"), ParseError);
  CHECK_THROWS_AS(parse_descriptor("Sum(Z^1)junk"), ParseError);
  CHECK_THROWS_AS(parse_descriptor("CyclicSum([3]; sometimes)"), ParseError);
  try {
    parse_descriptor("Sum(Z^1, Wat)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position == 9);
  }
}

TEST_CASE("element texts round-trip in every group kind") {
  auto roundtrip = [](const char* group, const char* text) {
    GroupDescriptor g = parse_descriptor(group);
    Element x = parse_element(g, text);
    CHECK(element_text(x) == text);
    CHECK(parse_element(g, element_text(x)) == x);
  };
  roundtrip("Z^1", "-3");
  roundtrip("Z^2", "(4, -1)");
  roundtrip("Z/4", "3");
  roundtrip("CyclicSum([3, 5, 7])", "{0:1, 2:6}");
  roundtrip("CyclicSum([3, 5, 7])", "{}");
  roundtrip("Z[1/2]", "-11/4");
  roundtrip("Q", "22/7");
  roundtrip("Prufer(2)", "(3, 3)");
  roundtrip("Q/Z", "5/6");
  roundtrip("Sum(Z^1, Q/Z)", "(5, 2/3)");
}

TEST_CASE("element parsing canonicalizes representatives") {
  auto z4 = parse_descriptor("Z/4");
  CHECK(parse_element(z4, "7") == Element(Residue{3}));
  CHECK(parse_element(z4, "-1") == Element(Residue{3}));

  auto pr = parse_descriptor("Prufer(2)");
  CHECK(parse_element(pr, "(6, 3)") == parse_element(pr, "3/4"));
  CHECK(parse_element(pr, "9/4") == parse_element(pr, "1/4"));
  CHECK(is_identity(pr, parse_element(pr, "(0, 0)")));

  auto qz = parse_descriptor("Q/Z");
  CHECK(parse_element(qz, "-1/3") == Element(QuotClass{Rat(2, 3)}));

  auto cs = parse_descriptor("CyclicSum([3, 5, 7])");
  CHECK(parse_element(cs, "{1:5}") == Element(ResidueVec{}));
  CHECK(parse_element(cs, "0") == Element(ResidueVec{}));
}

TEST_CASE("element parser rejects out-of-group values") {
  CHECK_THROWS_AS(parse_element(parse_descriptor("Z[1/2]"), "1/3"), ParseError);
  CHECK_THROWS_AS(parse_element(parse_descriptor("Z^2"), "(1, 2, 3)"),
                  ParseError);
  CHECK_THROWS_AS(parse_element(parse_descriptor("Z^1"), "5x"), ParseError);
  CHECK_THROWS_AS(parse_element(parse_descriptor("Prufer(2)"), "1/6"),
                  ParseError);
  // a coordinate past a finite sum's length surfaces the group's own error
  CHECK_THROWS_AS(parse_element(parse_descriptor("CyclicSum([3, 5])"), "{9:1}"),
                  std::invalid_argument);
}

TEST_CASE("rationals always print with an explicit denominator") {
  CHECK(rat_text(Rat(3)) == "3/1");
  CHECK(rat_text(Rat(-5, 8)) == "-5/8");
  CHECK(rat_text(Rat(0)) == "0/1");
}
