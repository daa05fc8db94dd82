#include <doctest.h>

#include <cmath>

#include "nlh/kernels.hpp"
#include "nlh/neighborhoods.hpp"
#include "oracles.hpp"

using namespace nlh;

TEST_CASE("fractional kernel values") {
  MetricMeasureSpace s = gen_interval(101);
  KernelModel k = KernelModel::fractional(1.0, 1.5);
  // rho = 0.01: 0.01^(-2.5) = 1e5
  CHECK(k.value(s, 0, 1) == doctest::Approx(1e5).epsilon(1e-9));
  CHECK(k.scaled(3.0).value(s, 0, 1) == doctest::Approx(3e5).epsilon(1e-9));
  CHECK(KernelModel::fractional(2.0, 0.5, 2.0).value(s, 0, 50) == doctest::Approx(2.0 * std::pow(0.5, -2.5)));
  CHECK_THROWS(eval_kernel(k, s, 3, 3));
  CHECK_THROWS(KernelModel::fractional(1.0, 2.0));
  CHECK_THROWS(KernelModel::fractional(1.0, 0.0));
}

TEST_CASE("truncated kernel switches to the floor") {
  MetricMeasureSpace s = gen_interval(11);
  KernelModel k = KernelModel::truncated_fractional(1.0, 0.5, 0.25, 1.0, 0.1);
  CHECK(k.value(s, 0, 2) == doctest::Approx(std::pow(0.2, -1.5)));
  CHECK(k.value(s, 0, 3) == doctest::Approx(0.1));
}

TEST_CASE("masses equal the sum over orderings of the one-sided density") {
  MetricMeasureSpace s = gen_circle(9).with_weights(Eigen::VectorXd::LinSpaced(9, 0.5, 1.3));
  KernelModel k = KernelModel::fractional(1.0, 0.7, 1.3);
  auto j = [&](int a, int b) { return k.value(s, a, b); };
  auto sets = enumerate_tuple_sets(s, NeighborhoodSystem::rips(2.2), 3);
  for (int p = 0; p <= 3; ++p) {
    WeightAssignment w = assemble_weights(k, s, sets[static_cast<std::size_t>(p)]);
    CHECK(w.degree == p);
    for (std::size_t i = 0; i < sets[static_cast<std::size_t>(p)].size(); ++i) {
      auto t = sets[static_cast<std::size_t>(p)][i];
      double ref = oracle::mass(s, j, oracle::Tuple(t.begin(), t.end()));
      CHECK(w.masses(static_cast<Eigen::Index>(i)) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("custom kernel tables") {
  KernelModel k = parse_kernel_table("0, 1, 2.0\n1, 2, 3.0\n0, 2, 4.0\n", 3);
  MetricMeasureSpace s = gen_interval(3);
  CHECK(k.value(s, 1, 0) == 2.0);
  CHECK(k.value(s, 2, 1) == 3.0);
  CHECK(k.symmetric());
  CHECK_THROWS_AS(parse_kernel_table("0, 1, 2.0\n", 3), LoadError);
  CHECK_THROWS_AS(parse_kernel_table("0, 1, x\n1,2,1\n0,2,1\n", 3), LoadError);
  KernelModel asym = parse_kernel_table("0,1,1\n1,0,2\n0,2,1\n1,2,1\n", 3);
  CHECK(!asym.symmetric());
}

TEST_CASE("non-positive kernel values are rejected") {
  CHECK_THROWS_AS(parse_kernel_table("0,1,1\n1,2,-1\n0,2,1\n", 3), LoadError);
  CHECK_THROWS_AS(parse_kernel_table("0,1,1\n1,2,0\n0,2,1\n", 3), LoadError);
}

TEST_CASE("kernel condition diagnostics") {
  MetricMeasureSpace s = gen_interval(21);
  KernelModel k = KernelModel::fractional(1.0, 0.5);
  KernelConditionReport r = check_kernel_conditions(k, s, 0.12);
  CHECK(!r.vacuous);
  CHECK(r.admissible_pairs == 20 + 19);
  CHECK(r.admissible_sup == doctest::Approx(std::pow(0.05, -1.5)));
  CHECK(r.admissible_inf == doctest::Approx(std::pow(0.1, -1.5)));
  // the near moment is maximal at an interior point with neighbors on both sides
  double interior = 2 * (0.05 * 0.05 * std::pow(0.05, -1.5) + 0.01 * std::pow(0.1, -1.5)) / 21;
  CHECK(r.near_moment_sup == doctest::Approx(interior));
  CHECK(check_kernel_conditions(k, s, 0.01).vacuous);
}
