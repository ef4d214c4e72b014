// Times each scan kernel's serial reference against the OpenMP variant on
// the same sample and confirms they return identical results. Usage:
// bench_sweeps [bound] (default 10).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cgc/chains.hpp"
#include "cgc/norms.hpp"
#include "cgc/sweep.hpp"

using namespace cgc;

namespace {

double ms(const std::function<void()>& work) {
  auto t0 = std::chrono::steady_clock::now();
  work();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, size_t n, double serial, double parallel,
         bool agree) {
  std::printf("%-18s %8zu %12.1f %12.1f %9.2fx   %s\n", name, n, serial,
              parallel, parallel > 0 ? serial / parallel : 0.0,
              agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int bound = argc > 1 ? std::atoi(argv[1]) : 10;
#ifdef _OPENMP
  std::printf("OpenMP enabled, %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; the dispatchers run the serial kernels\n");
#endif
  std::printf("%-18s %8s %12s %12s %10s\n", "kernel", "sample", "serial ms",
              "parallel ms", "speedup");

  GroupDescriptor plane = GroupDescriptor::int_power(2);
  std::vector<Element> gens;
  for (int i = 0; i < 2; ++i)
    for (int sgn : {1, -1}) {
      std::vector<Int> v(2, Int(0));
      v[static_cast<size_t>(i)] = sgn;
      gens.push_back(Element{IntVec{v}});
    }
  Metric word = word_metric(plane, gens);
  std::vector<Element> sample = enumerate_ball(plane, bound);
  ElementMap twist = [&](const Element& x) {
    const auto& c = x.as<IntVec>().c;
    return Element{IntVec{{c[1], c[0] + c[1]}}};
  };

  {
    PairDistances a, b;
    double ts = ms([&] { a = pair_distances_serial(sample, twist, word, word); });
    double tp = ms([&] { b = pair_distances_parallel(sample, twist, word, word); });
    row("pair_distances", sample.size(), ts, tp, a.rows == b.rows);
  }
  {
    Rat a, b;
    ElementMap ident = [](const Element& x) { return x; };
    double ts = ms([&] { a = max_map_distance_serial(sample, twist, ident, word); });
    double tp = ms([&] { b = max_map_distance_parallel(sample, twist, ident, word); });
    row("max_map_distance", sample.size(), ts, tp, a == b);
  }
  {
    AxiomScan a, b;
    double ts = ms([&] { a = norm_axioms_serial(word, sample); });
    double tp = ms([&] { b = norm_axioms_parallel(word, sample); });
    row("norm_axioms", sample.size(), ts, tp,
        a.violations == b.violations &&
            a.first.has_value() == b.first.has_value());
  }
  {
    GroupDescriptor torsion = GroupDescriptor::cyclic_sum({3, 5, 7});
    auto chain = std::make_shared<OneStepChain>(standard_chain(torsion));
    Metric ultra = chain_metric(chain);
    std::vector<Element> tsample = enumerate_ball(torsion, 3);
    AxiomScan a, b;
    double ts = ms([&] { a = strong_triangle_serial(ultra, tsample); });
    double tp = ms([&] { b = strong_triangle_parallel(ultra, tsample); });
    row("strong_triangle", tsample.size(), ts, tp,
        a.violations == b.violations &&
            a.first.has_value() == b.first.has_value());
  }
  return 0;
}
