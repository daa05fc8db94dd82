#include "suites.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nlh/capacity.hpp"
#include "nlh/cochains.hpp"
#include "nlh/covers.hpp"
#include "nlh/hodge.hpp"
#include "nlh/kernels.hpp"
#include "nlh/tuple_functions.hpp"

namespace nlh::suites {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json SuiteResult::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks) {
    Json j{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    cs.push_back(j);
  }
  return Json{{"suite", suite}, {"pass", pass()}, {"checks", cs}};
}

namespace {

Check at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return Check{std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

double rel(double a, double b) {
  double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

struct Case {
  std::string label;
  MetricMeasureSpace space;
  NeighborhoodSystem system;
};

std::vector<Case> identity_cases(const SuiteInput& in) {
  if (in.space) return {Case{"input", *in.space, NeighborhoodSystem::rips(in.eps)}};
  return {Case{"circle", gen_circle(16), NeighborhoodSystem::rips(1.2)},
          Case{"interval", gen_interval(12), NeighborhoodSystem::rips(0.3)}};
}

PointFunction random_function(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointFunction f(n);
  for (int i = 0; i < n; ++i) f(i) = u(rng);
  return f;
}

std::vector<int> random_tuple(int n, int len, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(len));
  return all;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace

SuiteResult identity_suite(const SuiteInput& in) {
  SuiteResult res{"identity", {}};
  std::mt19937_64 rng(in.seed);
  for (const Case& c : identity_cases(in)) {
    const int n = c.space.size();
    const int p_max = std::min(2, std::max(0, n - 2));
    WeightedComplex cx = WeightedComplex::build(c.space, c.system, KernelModel::fractional(1.0, 0.5), p_max);

    // integer dd = 0
    long nonzero = 0;
    for (int p = 0; p + 1 < cx.top_degree(); ++p) {
      Eigen::SparseMatrix<int> hi(cx.coboundary(p + 1).matrix), lo(cx.coboundary(p).matrix);
      Eigen::SparseMatrix<int> dd = hi * lo;
      dd.prune(0);
      nonzero += dd.nonZeros();
    }
    res.checks.push_back(at_most(c.label + ": integer dd = 0 (nonzero entries)", double(nonzero), 0.0));

    // adjoint of adjoint vanishes
    double worst = 0.0;
    for (int p = 0; p + 1 < cx.top_degree(); ++p) {
      Eigen::SparseMatrix<double> a = adjoint(cx, p) * adjoint(cx, p + 1);
      Eigen::SparseMatrix<double> s = adjoint(cx, p);
      double scale = 0.0;
      for (Eigen::Index k = 0; k < s.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
      Eigen::SparseMatrix<double> t = adjoint(cx, p + 1);
      double scale2 = 0.0;
      for (Eigen::Index k = 0; k < t.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(t, k); it; ++it) scale2 = std::max(scale2, std::abs(it.value()));
      for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
          worst = std::max(worst, std::abs(it.value()) / std::max(1e-300, scale * scale2));
    }
    res.checks.push_back(at_most(c.label + ": adjoint composed with adjoint vanishes", worst, 1e-12));

    // library coboundary against the pointwise raw coboundary of Alt-projected tensors
    worst = 0.0;
    for (int p = 0; p + 1 <= cx.top_degree() && p <= 2; ++p)
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<PointFunction> fs;
        for (int k = 0; k <= p; ++k) fs.push_back(random_function(n, rng));
        TupleFunction F = alt(tensor(fs));
        Cochain lower = alt_project(F, cx.tuple_set(p));
        Cochain upper = coboundary_apply(cx.coboundary(p), lower, cx.tuple_set(p + 1));
        Cochain direct = alt_project(raw_coboundary(F), cx.tuple_set(p + 1));
        if (upper.size() > 0) worst = std::max(worst, (upper.values() - direct.values()).cwiseAbs().maxCoeff());
      }
    res.checks.push_back(at_most(c.label + ": sparse coboundary matches pointwise definition", worst, 1e-12));

    // pointwise identities at random evaluation points
    double alt2 = 0, commute = 0, det = 0, small = 0, avg = 0, raw_dd = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int p = 1 + trial % 2;
      if (n < p + 2) break;
      std::vector<PointFunction> fs;
      for (int k = 0; k < p; ++k) fs.push_back(random_function(n, rng));
      std::vector<int> x = random_tuple(n, p + 1, rng);
      std::vector<int> y = random_tuple(n, p + 2, rng);
      TupleFunction T = tensor(fs);
      TupleFunction A = alt(T);
      std::vector<int> head(x.begin(), x.end() - 1);
      alt2 = std::max(alt2, std::abs(alt(A)(head) - A(head)));
      // d Alt = Alt d
      commute = std::max(commute, std::abs(raw_coboundary(A)(x) - alt(raw_coboundary(T))(x)));
      raw_dd = std::max(raw_dd, std::abs(raw_coboundary(raw_coboundary(T))(y)));
      // determinant form, both readings
      double lhs = raw_coboundary(A)(x);
      double d1 = determinant_form(fs, x);
      std::vector<PointFunction> grads;
      for (const auto& f : fs) grads.push_back(f.array() - f(x[0]));
      std::vector<int> tail(x.begin() + 1, x.end());
      double d2 = alt(tensor(grads))(tail);
      det = std::max({det, std::abs(lhs - d1), std::abs(lhs - d2)});
      // Alt of f_0..f_p expanded along the first slot
      std::vector<PointFunction> gs;
      for (int k = 0; k <= p; ++k) gs.push_back(random_function(n, rng));
      double full = alt(tensor(gs))(x);
      double expand = 0.0;
      for (int k = 0; k <= p; ++k) {
        std::vector<PointFunction> rest;
        for (int l = 0; l <= p; ++l)
          if (l != k) rest.push_back(gs[static_cast<std::size_t>(l)]);
        expand += ((k % 2) ? -1.0 : 1.0) * gs[static_cast<std::size_t>(k)](x[0]) * alt(tensor(rest))(tail);
      }
      small = std::max(small, std::abs(full - expand / (p + 1)));
      // Alt(g cup F) = g-bar F for antisymmetric F
      PointFunction g = random_function(n, rng);
      TupleFunction G = alt(tensor(gs));
      avg = std::max(avg, std::abs(alt(cup(g, G))(x) - average(g)(x) * G(x)));
    }
    res.checks.push_back(at_most(c.label + ": Alt is idempotent", alt2, 1e-12));
    res.checks.push_back(at_most(c.label + ": coboundary commutes with Alt", commute, 1e-12));
    res.checks.push_back(at_most(c.label + ": raw dd = 0 pointwise", raw_dd, 1e-12));
    res.checks.push_back(at_most(c.label + ": determinant formula", det, 1e-12));
    res.checks.push_back(at_most(c.label + ": first-slot expansion of Alt", small, 1e-12));
    res.checks.push_back(at_most(c.label + ": averaging antisymmetrizes cup", avg, 1e-12));

    // adjointness in the weighted inner products
    worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int p = trial % (cx.p_max() + 1);
      if (cx.dim(p + 1) == 0) continue;
      Eigen::VectorXd F = random_vector(static_cast<Eigen::Index>(cx.dim(p)), rng);
      Eigen::VectorXd G = random_vector(static_cast<Eigen::Index>(cx.dim(p + 1)), rng);
      worst = std::max(worst, rel(cx.inner(p + 1, cx.B(p) * F, G), cx.inner(p, F, adjoint(cx, p) * G)));
    }
    res.checks.push_back(at_most(c.label + ": <dF,G> = <F,d*G>", worst, 1e-10));
  }
  return res;
}

SuiteResult hodge_suite(const SuiteInput& in) {
  SuiteResult res{"hodge", {}};
  std::mt19937_64 rng(in.seed + 1);
  MetricMeasureSpace space = in.space ? *in.space : gen_circle(64);
  const double eps = in.space ? in.eps : 0.5;
  WeightedComplex cx = WeightedComplex::build(space, NeighborhoodSystem::rips(eps), KernelModel::fractional(1.0, 0.5), 2);
  const int p_max = cx.p_max();

  double adj = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = trial % (p_max + 1);
    if (cx.dim(p) == 0 || cx.dim(p + 1) == 0) continue;
    Eigen::VectorXd F = random_vector(static_cast<Eigen::Index>(cx.dim(p)), rng);
    Eigen::VectorXd G = random_vector(static_cast<Eigen::Index>(cx.dim(p + 1)), rng);
    adj = std::max(adj, rel(cx.inner(p + 1, cx.B(p) * F, G), cx.inner(p, F, adjoint(cx, p) * G)));
  }
  res.checks.push_back(at_most("adjointness, 100 random pairs", adj, 1e-10));

  for (int p = 0; p <= p_max; ++p) {
    if (cx.dim(p) == 0) continue;
    const std::string tag = "degree " + std::to_string(p) + ": ";
    Eigen::MatrixXd S = hodge_laplacian(cx, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    double lmax = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    double neg = std::max(0.0, -es.eigenvalues().minCoeff()) / lmax;
    res.checks.push_back(at_most(tag + "Laplacian is positive semidefinite", neg, 1e-10));
    double asym = (S - S.transpose()).cwiseAbs().maxCoeff() / lmax;
    res.checks.push_back(at_most(tag + "symmetrized Laplacian is symmetric", asym, 1e-12));

    Eigen::VectorXd F = random_vector(static_cast<Eigen::Index>(cx.dim(p)), rng);
    HodgeDecomposition hd = hodge_decompose(cx, p, F);
    res.checks.push_back(at_most(tag + "Hodge decomposition reconstructs F", hd.reconstruction_residual, 1e-8));
    res.checks.push_back(at_most(tag + "Hodge pieces are orthogonal", hd.orthogonality_residual, 1e-8));

    // Q_p(F) = |dF|^2 against <d*d F, F>
    Eigen::VectorXd up = adjoint(cx, p) * (cx.B(p) * F);
    double q1 = energy_norms(cx, p, F).dirichlet;
    double q2 = cx.inner(p, up, F);
    res.checks.push_back(at_most(tag + "quadratic form matches Laplacian up part", rel(q1, q2), 1e-10));
  }
  return res;
}

SuiteResult poincare_suite(const SuiteInput&) {
  SuiteResult res{"poincare", {}};
  for (const BundledCover& bc : {default_circle_cover(), default_interval_cover()}) {
    CoverSystem cover = bc.build(3);
    PartitionOfUnity pu(cover, 0);
    double sum_err = 0.0;
    for (int p = 0; p <= cover.top_degree(); ++p) {
      const TupleSet& ts = cover.tuples(p);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        double s = 0.0;
        for (std::size_t a = 0; a < cover.ball_count(); ++a) s += pu.chi(a, ts[i]);
        sum_err = std::max(sum_err, std::abs(s - 1.0));
      }
    }
    res.checks.push_back(at_most(bc.name + ": partition of unity sums to one", sum_err, 1e-14));

    double defect = 0.0;
    std::size_t failures = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < cover.intersections().size(); ++i) {
      try {
        HomotopyOperator h = build_slice_and_psi(cover, i);
        for (int p = 1; p + 1 <= h.max_degree && p <= 2; ++p) defect = std::max(defect, homotopy_defect(cover, h, p));
      } catch (const AssumptionViolation& e) {
        if (failures++ == 0) first_failure = e.what();
      }
    }
    res.checks.push_back(Check{bc.name + ": slices nonempty on every intersection", failures == 0, double(failures),
                               0.0, first_failure});
    res.checks.push_back(at_most(bc.name + ": homotopy identity on " + std::to_string(cover.intersections().size()) +
                                     " intersections",
                                 defect, 1e-12));
  }
  return res;
}

SuiteResult mv_suite(const SuiteInput&) {
  SuiteResult res{"mv", {}};
  for (const BundledCover& bc : {default_circle_cover(), default_interval_cover()}) {
    CoverSystem cover = bc.build(3);
    PartitionOfUnity pu(cover, 0);
    for (int p = 0; p <= 2; ++p) {
      const std::string tag = bc.name + ", degree " + std::to_string(p) + ": ";
      MvCertificate cert = mayer_vietoris_check(cover, pu, p);
      std::size_t inexact = 0;
      for (const auto& r : cert.rows) inexact += r.exact ? 0 : 1;
      res.checks.push_back(Check{tag + "rank identities exact", cert.ranks_exact(), double(inexact), 0.0, {}});
      res.checks.push_back(at_most(tag + "reconstruction through the partition", cert.reconstruction_residual,
                                   cert.reconstruction_tolerance));
      MvCertificate bad = mayer_vietoris_check(cover, pu, p, -1, Reconstruction::drop_partition);
      res.checks.push_back(Check{tag + "negative control (partition dropped) is detected",
                                 !bad.reconstruction_ok(), bad.reconstruction_residual, bad.reconstruction_tolerance,
                                 {}});
    }
    BettiReport nerve = cech_nerve_betti(cover);
    std::vector<int> ref = reference_betti(bc.space.metadata(), static_cast<int>(nerve.betti.size()) - 1);
    std::ostringstream os;
    for (int b : nerve.betti) os << b << ' ';
    res.checks.push_back(Check{bc.name + ": nerve cohomology matches the sampled object", nerve.betti == ref, 0.0, 0.0,
                               os.str()});
  }
  return res;
}

SuiteResult capacity_suite(const SuiteInput&) {
  SuiteResult res{"capacity", {}};
  MetricMeasureSpace space = gen_interval(60);
  auto system = NeighborhoodSystem::rips(0.25);
  auto kernel = KernelModel::fractional(1.0, 0.5);
  WeightedComplex cx = WeightedComplex::build(space, system, kernel, 0);

  std::vector<int> all(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  CapacityResult full = capacity(make_capacity_problem(space, cx, all));
  res.checks.push_back(at_most("clamping every point gives the total mass", rel(full.value, space.total_mass()), 1e-12));

  CapacityResult small = capacity(make_capacity_problem(space, cx, {30}));
  CapacityResult large = capacity(make_capacity_problem(space, cx, {29, 30, 31, 32}));
  res.checks.push_back(Check{"monotone in the target set", small.value <= large.value * (1 + 1e-12),
                             small.value, large.value, {}});
  res.checks.push_back(Check{"minimizer obeys the maximum principle", small.maximum_principle, small.min_u, 0.0, {}});

  WeightedComplex narrow = WeightedComplex::build(space, NeighborhoodSystem::rips(0.1), kernel, 0);
  CapacityResult less = capacity(make_capacity_problem(space, narrow, {30}));
  res.checks.push_back(Check{"monotone in the admissible pair set", less.value <= small.value * (1 + 1e-12), less.value,
                             small.value, {}});

  CapacityResult scaled = capacity(make_capacity_problem(space, cx, {30}).scaled(3.0));
  res.checks.push_back(at_most("homogeneous under scaling of all masses", rel(scaled.value, 3.0 * small.value), 1e-12));

  SweepReport sweep = removability_sweep(SweepConfig{{50, 100, 200, 400, 800}, 0.5, {0.5, 1.5}, 0.25, 1.0});
  const AlphaVerdict& lo = sweep.verdict_for(0.5);
  const AlphaVerdict& hi = sweep.verdict_for(1.5);
  res.checks.push_back(Check{"alpha 0.5: monotone decrease", lo.monotone_decreasing, lo.slope, 0.0, {}});
  res.checks.push_back(Check{"alpha 0.5: log-log slope below -0.2", lo.slope < -0.2, lo.slope, -0.2, {}});
  res.checks.push_back(Check{"alpha 1.5: max/min ratio below 1.25", hi.ratio < 1.25, hi.ratio, 1.25, {}});
  return res;
}

std::vector<std::string> suite_names() { return {"identity", "hodge", "poincare", "mv", "capacity"}; }

std::vector<SuiteResult> run_suites(const std::string& which, const SuiteInput& in) {
  const std::vector<std::string> known = suite_names();
  std::vector<std::string> names;
  if (which == "all")
    names = known;
  else if (std::find(known.begin(), known.end(), which) != known.end())
    names = {which};
  else
    throw std::invalid_argument("unknown suite '" + which + "'");
  std::vector<SuiteResult> out;
  for (const auto& n : names) {
    if (n == "identity") out.push_back(identity_suite(in));
    if (n == "hodge") out.push_back(hodge_suite(in));
    if (n == "poincare") out.push_back(poincare_suite(in));
    if (n == "mv") out.push_back(mv_suite(in));
    if (n == "capacity") out.push_back(capacity_suite(in));
  }
  return out;
}

}  // namespace nlh::suites
