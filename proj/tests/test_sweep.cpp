#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgc/splitting.hpp"
#include "cgc/sweep.hpp"
#include "cgc/verify.hpp"

#include <memory>

using namespace cgc;

namespace {

Metric z_word_metric() {
  return word_metric(GroupDescriptor::int_power(1),
                     {Element{IntVec{{Int(1)}}}, Element{IntVec{{Int(-1)}}}});
}

// A deliberately broken norm on Z: vanishes at 5, asymmetric under negation.
Metric skew_metric() {
  Metric m;
  m.group = GroupDescriptor::int_power(1);
  m.name = "skew";
  m.norm = [](const Element& e) {
    const Int& v = e.as<IntVec>().c[0];
    if (v == 5) return Rat(0);
    return v < 0 ? Rat(int_abs(v) + 1) : Rat(v);
  };
  return m;
}

// Chain metric over CyclicSum([3,5,7]) with a non-monotone scale sequence, so
// a sum of two short level-2 elements can land on the long level-1 coset.
Metric corrupted_chain_metric() {
  GroupDescriptor cs = GroupDescriptor::cyclic_sum({3, 5, 7});
  auto chain = std::make_shared<const OneStepChain>(
      standard_chain(cs, parse_scale_rule("3,1,5"), 64, false));
  return chain_metric(chain);
}

struct DyadicSplitMaps {
  Metric dom = dyadic_metric();
  Metric cod = sum_metric({z_word_metric(), prufer_metric(2)});
  ElementMap f = [](const Element& e) {
    auto [m, q] = dyadic_split(e.as<Rational>().v);
    return Element{Tuple{Element{IntVec{{m}}}, Element{q}}};
  };
};

void check_same_scan(const AxiomScan& a, const AxiomScan& b) {
  CHECK(a.violations == b.violations);
  REQUIRE(a.first.has_value() == b.first.has_value());
  if (a.first) {
    CHECK(a.first->axiom == b.first->axiom);
    CHECK(a.first->i == b.first->i);
    CHECK(a.first->j == b.first->j);
  }
}

}  // namespace

TEST_CASE("pair distance kernels agree and index pairs lexicographically") {
  DyadicSplitMaps maps;
  std::vector<Element> sample =
      enumerate_ball(GroupDescriptor::localized(2), 4);
  REQUIRE(sample.size() == 33);

  PairDistances serial =
      pair_distances_serial(sample, maps.f, maps.dom, maps.cod);
  PairDistances parallel =
      pair_distances_parallel(sample, maps.f, maps.dom, maps.cod);
  PairDistances again =
      pair_distances_parallel(sample, maps.f, maps.dom, maps.cod);
  CHECK(serial.rows.size() == 33 * 32 / 2);
  CHECK(serial.rows == parallel.rows);
  CHECK(parallel.rows == again.rows);
  CHECK(pair_distances(sample, maps.f, maps.dom, maps.cod).rows == serial.rows);

  CHECK(serial.rows[0].first == maps.dom.distance(sample[0], sample[1]));
  CHECK(serial.rows[0].second ==
        maps.cod.distance(maps.f(sample[0]), maps.f(sample[1])));

  std::vector<Element> one{sample[0]};
  CHECK(pair_distances_serial(one, maps.f, maps.dom, maps.cod).rows.empty());
  CHECK(pair_distances_serial({}, maps.f, maps.dom, maps.cod).rows.empty());
}

TEST_CASE("control tables accumulate the largest image distance per scale") {
  PairDistances dists;
  dists.rows = {{Rat(1), Rat(5)}, {Rat(2), Rat(3)}, {Rat(3), Rat(7)}};
  std::vector<std::pair<Rat, Rat>> table =
      control_table(dists, {Rat(0), Rat(1), Rat(2), Rat(3)});
  REQUIRE(table.size() == 4);
  CHECK(table[0].second == 0);
  CHECK(table[1].second == 5);
  CHECK(table[2].second == 5);
  CHECK(table[3].second == 7);
  for (size_t i = 0; i + 1 < table.size(); ++i)
    CHECK(table[i].second <= table[i + 1].second);

  // the certificate wrapper reports exactly these numbers
  DyadicSplitMaps maps;
  std::vector<Element> sample =
      enumerate_ball(GroupDescriptor::localized(2), 4);
  std::vector<Rat> grid{Rat(1), Rat(2), Rat(3), Rat(4)};
  PairDistances full = pair_distances(sample, maps.f, maps.dom, maps.cod);
  std::vector<std::pair<Rat, Rat>> direct = control_table(full, grid);
  ControlCertificate cert =
      control_function(maps.f, maps.dom, maps.cod, sample, grid);
  REQUIRE(cert.rows.size() == direct.size());
  for (size_t i = 0; i < direct.size(); ++i) {
    CHECK(cert.rows[i].delta == direct[i].first);
    CHECK(cert.rows[i].eps_max == direct[i].second);
  }
}

TEST_CASE("map distance kernels agree on the dyadic round trip") {
  DyadicSplitMaps maps;
  ElementMap round = [&maps](const Element& e) {
    Element image = maps.f(e);
    const auto& t = image.as<Tuple>();
    return Element{
        Rational{dyadic_unsplit(t[0].as<IntVec>().c[0], t[1].as<PruferVal>())}};
  };
  ElementMap id = [](const Element& e) { return e; };
  std::vector<Element> sample =
      enumerate_ball(GroupDescriptor::localized(2), 8);

  Rat serial = max_map_distance_serial(sample, round, id, maps.dom);
  CHECK(serial == 1);
  CHECK(max_map_distance_parallel(sample, round, id, maps.dom) == serial);
  CHECK(max_map_distance(sample, round, id, maps.dom) == serial);
  CHECK(max_map_distance_serial({}, round, id, maps.dom) == 0);
}

TEST_CASE("norm axiom sweeps pass on the shipped metrics") {
  Metric zw = z_word_metric();
  AxiomScan word = norm_axioms(zw, enumerate_ball(zw.group, 6));
  CHECK(word.ok());
  CHECK(!word.first);

  Metric dy = dyadic_metric();
  std::vector<Element> ball = enumerate_ball(GroupDescriptor::localized(2), 6);
  check_same_scan(norm_axioms_serial(dy, ball), norm_axioms_parallel(dy, ball));
  CHECK(norm_axioms(dy, ball).ok());

  Metric pr = prufer_metric(2);
  std::vector<Element> pball = enumerate_ball(GroupDescriptor::prufer(2), 5);
  CHECK(norm_axioms(pr, pball).ok());
  CHECK(strong_triangle(pr, pball).ok());

  CHECK(norm_axioms(zw, {}).ok());
  CHECK(strong_triangle(zw, {}).ok());
}

TEST_CASE("norm axiom sweeps catch a broken norm with a stable witness") {
  Metric skew = skew_metric();
  std::vector<Element> sample = enumerate_ball(skew.group, 6);

  AxiomScan serial = norm_axioms_serial(skew, sample);
  AxiomScan parallel = norm_axioms_parallel(skew, sample);
  check_same_scan(serial, parallel);
  CHECK(!serial.ok());
  CHECK(serial.violations >= 13);  // 12 negation failures plus the zero at 5
  REQUIRE(serial.first);
  // sample index 0 is -6, whose negation has a different length
  CHECK(serial.first->axiom == "negation preserves the norm");
  CHECK(serial.first->i == 0);
  CHECK(serial.first->j == 0);
}

TEST_CASE("subadditivity fails under a non-monotone scale sequence") {
  Metric bad = corrupted_chain_metric();
  std::vector<Element> sample = enumerate_ball(bad.group, 3);
  REQUIRE(sample.size() == 105);

  AxiomScan serial = norm_axioms_serial(bad, sample);
  AxiomScan parallel = norm_axioms_parallel(bad, sample);
  check_same_scan(serial, parallel);
  CHECK(!serial.ok());
  REQUIRE(serial.first);
  CHECK(serial.first->axiom == "subadditive on pairs");
  CHECK(serial.first->i < serial.first->j);

  AxiomScan tri_serial = strong_triangle_serial(bad, sample);
  AxiomScan tri_parallel = strong_triangle_parallel(bad, sample);
  check_same_scan(tri_serial, tri_parallel);
  CHECK(!tri_serial.ok());
  REQUIRE(tri_serial.first);
  CHECK(tri_serial.first->axiom == "strong triangle inequality");
}

TEST_CASE("strong triangle sweep distinguishes word metrics from ultrametrics") {
  Metric zw = z_word_metric();
  std::vector<Element> sample = enumerate_ball(zw.group, 2);
  AxiomScan scan = strong_triangle(zw, sample);
  CHECK(!scan.ok());  // d(-2, 2) = 4 exceeds both legs through 0
  check_same_scan(strong_triangle_serial(zw, sample),
                  strong_triangle_parallel(zw, sample));

  GroupDescriptor cs = GroupDescriptor::cyclic_sum({3, 5});
  auto chain = std::make_shared<const OneStepChain>(standard_chain(cs, {}));
  Metric ultra = chain_metric(chain);
  CHECK(strong_triangle(ultra, enumerate_ball(cs, 2)).ok());
}
