#include <doctest.h>

#include <random>

#include "nlh/cohomology.hpp"
#include "oracles.hpp"

using namespace nlh;

TEST_CASE("both moduli are prime") {
  CHECK(oracle::is_prime(kPrimaryPrime));
  CHECK(oracle::is_prime(kSecondaryPrime));
  for (long long v = kSecondaryPrime + 1; v < kPrimaryPrime; ++v) CHECK(!oracle::is_prime(v));
}

TEST_CASE("ranks agree with floating point rank on random integer matrices") {
  std::mt19937_64 g(8);
  std::uniform_int_distribution<int> val(-2, 2), dim(1, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = dim(g), c = dim(g);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(r, c);
    // low-rank products give nontrivial rank deficits
    const int k = 1 + trial % 4;
    Eigen::MatrixXd a(r, k), b(k, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = val(g);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < c; ++j) b(i, j) = val(g);
    dense = a * b;
    Eigen::SparseMatrix<int> sp = dense.cast<int>().sparseView();
    IntColumns cols = to_columns(sp);
    const int ref = oracle::rank(dense);
    CHECK(rank_mod_prime(cols, kPrimaryPrime) == static_cast<std::size_t>(ref));
    CHECK(rank_mod_prime(cols, kSecondaryPrime) == static_cast<std::size_t>(ref));
    CHECK(rank_rational(cols) == static_cast<std::size_t>(ref));
  }
}

TEST_CASE("a multiple of the prime vanishes only in the prime field") {
  Eigen::SparseMatrix<int> m(1, 1);
  m.insert(0, 0) = static_cast<int>(kPrimaryPrime);
  IntColumns cols = to_columns(m);
  CHECK(rank_mod_prime(cols, kPrimaryPrime) == 0);
  CHECK(rank_mod_prime(cols, kSecondaryPrime) == 1);
  CHECK(rank_rational(cols) == 1);
}

TEST_CASE("exact Betti numbers match the oracle and ignore weights") {
  MetricMeasureSpace s = gen_circle(18);
  for (double eps : {0.5, 1.2, 2.5, 3.5}) {
    WeightedComplex cx =
        WeightedComplex::build(s, NeighborhoodSystem::rips(eps), KernelModel::fractional(1, 0.5), 2);
    std::vector<int> ref = oracle::betti(18, 2, oracle::rips(s, eps));
    for (ExactField f : {ExactField::primary_prime, ExactField::secondary_prime, ExactField::rational}) {
      BettiReport b = exact_betti(cx, f);
      CHECK(b.betti == ref);
      CHECK(b.field == field_name(f));
    }
    WeightedComplex other = cx.reweighted(s, KernelModel::constant(7.0));
    CHECK(exact_betti(other).betti == ref);
  }
}

TEST_CASE("agreement reports and cross validation") {
  MetricMeasureSpace s = gen_circle(20);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.8), KernelModel::fractional(1, 0.5), 1);
  std::vector<HodgeReport> hodge{harmonic_dimension(cx, 0), harmonic_dimension(cx, 1)};
  BettiReport b = exact_betti(cx);
  AgreementReport a = cross_validate(cx, hodge, b);
  CHECK(a.all_agree);
  CHECK(hodge[1].oracle_betti == 1);
  CHECK(hodge[1].agree == true);
  CHECK(b.to_json()["schema"] == 1);
  CHECK(numeric_betti(hodge).betti == b.betti);

  // a forged disagreement is reported with its spectral neighborhood
  std::vector<HodgeReport> forged = hodge;
  forged[1].harmonic_dim = 2;
  BettiReport b2 = exact_betti(cx);
  AgreementReport bad = cross_validate(cx, forged, b2);
  CHECK(!bad.all_agree);
  CHECK(b2.field == field_name(ExactField::rational));
  CHECK(!bad.degrees[1].spectral_neighborhood.empty());
  CHECK(bad.describe().find("degree 1") != std::string::npos);
}
