#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlh/space.hpp"

using namespace nlh;

TEST_CASE("circle generator uses geodesic distances and arc weights") {
  MetricMeasureSpace s = gen_circle(12, 2.0);
  CHECK(s.size() == 12);
  const double step = 2.0 * 2.0 * std::numbers::pi / 12;
  CHECK(s.distance(0, 1) == doctest::Approx(step));
  CHECK(s.distance(0, 11) == doctest::Approx(step));
  CHECK(s.distance(0, 6) == doctest::Approx(6 * step));
  CHECK(s.distance(2, 9) == doctest::Approx(5 * step));
  CHECK(s.total_mass() == doctest::Approx(2.0 * 2.0 * std::numbers::pi));
  CHECK(s.metadata().generator == "circle");
  CHECK(s.metadata().regularity_dim == 1.0);
}

TEST_CASE("interval generator") {
  MetricMeasureSpace s = gen_interval(11);
  CHECK(s.distance(0, 10) == doctest::Approx(1.0));
  CHECK(s.distance(3, 7) == doctest::Approx(0.4));
  CHECK(s.total_mass() == doctest::Approx(1.0));
  CHECK(s.min_separation() == doctest::Approx(0.1));
  CHECK(s.diameter() == doctest::Approx(1.0));
}

TEST_CASE("two components keep the gap") {
  MetricMeasureSpace s = gen_two_components(5, 0.3);
  CHECK(s.size() == 10);
  CHECK(s.distance(4, 5) == doctest::Approx(0.3));
  CHECK(s.distance(0, 9) == doctest::Approx(2.3));
}

TEST_CASE("punctured interval drops the hole") {
  // grid step 0.01 puts 0.5 on a sample; radius 0.005 removes exactly it
  MetricMeasureSpace s = gen_punctured_interval(101, 0.5, 0.005);
  CHECK(s.size() == 100);
  MetricMeasureSpace wide = gen_punctured_interval(101, 0.5, 0.105);
  CHECK(wide.size() == 101 - 21);
  CHECK_THROWS_AS(gen_punctured_interval(5, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("sphere points lie on the unit sphere") {
  MetricMeasureSpace s = gen_sphere(50);
  CHECK(s.size() == 50);
  CHECK(s.diameter() <= std::numbers::pi + 1e-12);
  CHECK(s.diameter() > 2.5);
  CHECK(s.total_mass() == doctest::Approx(4.0 * std::numbers::pi));
  CHECK_THROWS(gen_sphere(3));
}

TEST_CASE("validator rejects broken metrics with indices") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5, 1, 0, 1, 5, 1, 0;  // triangle inequality fails at (0,2) via 1
  Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
  try {
    validate_metric(d, w);
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(!e.indices().empty());
  }
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 1.5, 0;
  CHECK_THROWS_AS(validate_metric(asym, Eigen::VectorXd::Ones(2)), LoadError);
  Eigen::MatrixXd zero(2, 2);
  zero << 0, 0, 0, 0;
  CHECK_THROWS_AS(validate_metric(zero, Eigen::VectorXd::Ones(2)), LoadError);
  Eigen::MatrixXd ok(2, 2);
  ok << 0, 1, 1, 0;
  CHECK_THROWS_AS(validate_metric(ok, Eigen::Vector2d(1.0, -1.0)), LoadError);
  CHECK_THROWS_AS(validate_metric(ok, Eigen::Vector2d(1.0, NAN)), LoadError);
  CHECK_NOTHROW(validate_metric(ok, Eigen::Vector2d(1.0, 2.0)));
}

TEST_CASE("parsers report line and column") {
  CHECK(parse_distance_matrix("0,1\n1,0\n").rows() == 2);
  try {
    parse_distance_matrix("0,1\n1,x\n");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_distance_matrix("0,nan\nnan,0\n"), LoadError);
  CHECK_THROWS_AS(parse_distance_matrix("0,1,2\n1,0\n"), LoadError);
  CHECK_THROWS_AS(parse_weights("1\ninf\n"), LoadError);
  CHECK(parse_weights("0.5\n\n0.25\n").size() == 2);
}

TEST_CASE("permutation relabels points consistently") {
  MetricMeasureSpace s = gen_interval(5);
  std::vector<int> perm{4, 2, 0, 1, 3};
  MetricMeasureSpace t = s.permuted(perm);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(t.distance(i, j) == s.distance(perm[i], perm[j]));
  CHECK(s.with_weights(Eigen::VectorXd::Constant(5, 2.0)).total_mass() == doctest::Approx(10.0));
}

TEST_CASE("near-coincident points raise a warning") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1e-12, 1e-12, 0;
  MetricMeasureSpace s(d, Eigen::VectorXd::Ones(2));
  CHECK(!s.warnings().empty());
}

TEST_CASE("generated spaces satisfy the full metric check") {
  for (const MetricMeasureSpace& s : {gen_circle(17, 0.7), gen_interval(19), gen_two_components(6, 0.2),
                                      gen_punctured_interval(31, 0.4, 0.1), gen_sphere(40)})
    CHECK_NOTHROW(validate_metric(s.distances(), s.weights(), true));
}
