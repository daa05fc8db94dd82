#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "nlh/hodge.hpp"
#include "oracles.hpp"

using namespace nlh;

namespace {

Eigen::VectorXd rnd(Eigen::Index n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = d(g);
  return v;
}

}  // namespace

TEST_CASE("complex layout") {
  MetricMeasureSpace s = gen_circle(12);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(1.2), KernelModel::fractional(1, 0.5), 2);
  CHECK(cx.top_degree() == 3);
  CHECK(cx.p_max() == 2);
  CHECK(cx.B(3).rows() == 0);
  CHECK(cx.B(3).cols() == static_cast<Eigen::Index>(cx.dim(3)));
  CHECK_THROWS_AS(hodge_laplacian(cx, 3), std::out_of_range);
}

TEST_CASE("adjoint is the weighted transpose") {
  std::mt19937_64 g(1);
  MetricMeasureSpace s = gen_interval(15);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.3), KernelModel::fractional(1, 1.2), 1);
  for (int p = 0; p <= 1; ++p) {
    Eigen::MatrixXd ref = cx.weights(p).cwiseInverse().asDiagonal() * Eigen::MatrixXd(cx.B(p)).transpose() *
                          cx.weights(p + 1).asDiagonal();
    Eigen::MatrixXd got(adjoint(cx, p));
    CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
    Eigen::VectorXd F = rnd(static_cast<Eigen::Index>(cx.dim(p)), g), G = rnd(static_cast<Eigen::Index>(cx.dim(p + 1)), g);
    double a = cx.inner(p + 1, cx.B(p) * F, G), b = cx.inner(p, F, adjoint(cx, p) * G);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("harmonic dimensions equal oracle Betti numbers") {
  struct Case {
    MetricMeasureSpace s;
    double eps;
    int p_max;
  };
  std::vector<Case> cases{{gen_circle(20), 0.8, 2}, {gen_interval(16), 0.2, 1}, {gen_two_components(6, 0.5), 0.3, 1}};
  for (const auto& c : cases) {
    WeightedComplex cx =
        WeightedComplex::build(c.s, NeighborhoodSystem::rips(c.eps), KernelModel::fractional(1, 0.5), c.p_max);
    std::vector<int> ref = oracle::betti(c.s.size(), c.p_max, oracle::rips(c.s, c.eps));
    for (int p = 0; p <= c.p_max; ++p) {
      HodgeReport r = harmonic_dimension(cx, p);
      CHECK(r.harmonic_dim == ref[static_cast<std::size_t>(p)]);
      CHECK(!r.uncertain);
      CHECK(r.complete_spectrum);
      Eigen::MatrixXd L = Eigen::MatrixXd(weighted_laplacian(cx, p));
      Eigen::MatrixXd S = hodge_laplacian(cx, p);
      Eigen::VectorXd ws = cx.weights(p).cwiseSqrt();
      Eigen::MatrixXd conj = ws.asDiagonal() * L * ws.cwiseInverse().asDiagonal();
      CHECK((conj - S).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, S.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("iterative eigensolver agrees with the dense one") {
  MetricMeasureSpace s = gen_circle(40);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.6), KernelModel::fractional(1, 0.5), 1);
  for (int p = 0; p <= 1; ++p) {
    HodgeReport dense = harmonic_dimension(cx, p);
    TolerancePolicy forced;
    forced.dense_limit = 10;
    forced.lanczos_count = 4;
    HodgeReport krylov = harmonic_dimension(cx, p, forced);
    CHECK(!krylov.complete_spectrum);
    CHECK(krylov.harmonic_dim == dense.harmonic_dim);
    for (Eigen::Index i = dense.harmonic_dim; i < std::min(krylov.eigenvalues.size(), Eigen::Index(6)); ++i)
      CHECK(krylov.eigenvalues(i) == doctest::Approx(dense.eigenvalues(i)).epsilon(1e-8));
  }
  Eigen::SparseMatrix<double> D(5, 5);
  for (int i = 0; i < 5; ++i) D.insert(i, i) = i < 2 ? 0.0 : double(i);
  Eigen::VectorXd low = lowest_eigenvalues(D, 3, 1e-6);
  CHECK(low(0) == doctest::Approx(0.0).scale(1.0));
  CHECK(low(2) == doctest::Approx(2.0));
}

TEST_CASE("fixed tolerance and gap diagnostics") {
  MetricMeasureSpace s = gen_circle(16);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.9), KernelModel::fractional(1, 0.5), 1);
  TolerancePolicy huge;
  huge.fixed = 1e12;
  HodgeReport r = harmonic_dimension(cx, 1, huge);
  CHECK(r.harmonic_dim == static_cast<int>(r.dim));
  HodgeReport ok = harmonic_dimension(cx, 1);
  CHECK(ok.gap_ratio > 1e3);
  CHECK(ok.smallest_nonzero() > 0.0);
  CHECK(ok.to_json()["harmonic_dim"] == 1);
}

TEST_CASE("Hodge decomposition") {
  std::mt19937_64 g(2);
  MetricMeasureSpace s = gen_circle(24);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.8), KernelModel::fractional(1, 0.5), 2);
  for (int p = 0; p <= 2; ++p) {
    Eigen::VectorXd F = rnd(static_cast<Eigen::Index>(cx.dim(p)), g);
    HodgeDecomposition hd = hodge_decompose(cx, p, F);
    CHECK(hd.reconstruction_residual < 1e-8);
    CHECK(hd.orthogonality_residual < 1e-8);
    // harmonic part is annihilated by d and d*
    CHECK((cx.B(p) * hd.harmonic).norm() < 1e-8 * F.norm());
    if (p > 0) CHECK((adjoint(cx, p - 1) * hd.harmonic).norm() < 1e-8 * F.norm() * 1e3);
    EnergyNorms e = energy_norms(cx, p, F);
    CHECK(e.graph == doctest::Approx(e.l2 + e.dirichlet));
    CHECK(e.dirichlet == doctest::Approx(cx.norm_squared(p + 1, cx.B(p) * F)));
  }
}

TEST_CASE("carre du champ and multiplier bound") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(-1, 1);
  MetricMeasureSpace s = gen_interval(12);
  KernelModel k = KernelModel::fractional(1, 0.5);
  WeightedComplex cx = WeightedComplex::build(s, NeighborhoodSystem::rips(0.35), k, 2);
  PointFunction f(12);
  for (int i = 0; i < 12; ++i) f(i) = u(g);
  Eigen::VectorXd gam = carre_du_champ(cx, f);
  for (int x = 0; x < 12; ++x) {
    double ref = 0.0;
    for (int y = 0; y < 12; ++y)
      if (y != x && s.distance(x, y) < 0.35) ref += (f(y) - f(x)) * (f(y) - f(x)) * k.value(s, x, y) * s.weight(y);
    CHECK(gam(x) == doctest::Approx(ref).epsilon(1e-12));
  }
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 3;
    PointFunction chi(12);
    for (int i = 0; i < 12; ++i) chi(i) = u(g);
    MultiplierCheck m = multiplier_bound_check(cx, p, chi, rnd(static_cast<Eigen::Index>(cx.dim(p)), g));
    CHECK(m.pass);
    CHECK(m.lhs <= m.rhs);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    PointFunction g0(12), f1(12), f2(12);
    for (int k2 = 0; k2 < 12; ++k2) g0(k2) = u(g), f1(k2) = u(g), f2(k2) = u(g);
    CHECK(elementary_norm_bound(cx, g0, {f1, f2}, i).pass);
  }
}

TEST_CASE("reweighting keeps the structure") {
  MetricMeasureSpace s = gen_circle(18);
  WeightedComplex a = WeightedComplex::build(s, NeighborhoodSystem::rips(0.8), KernelModel::fractional(1, 0.5), 1);
  WeightedComplex b = a.reweighted(s, KernelModel::fractional(1, 1.5));
  CHECK(a.tuples(1) == b.tuples(1));
  CHECK((a.weights(1) - b.weights(1)).norm() > 0.0);
  CHECK(harmonic_dimension(a, 1).harmonic_dim == harmonic_dimension(b, 1).harmonic_dim);
}
