#include "nlh/capacity.hpp"

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlh/format.hpp"
#include "nlh/parallel.hpp"

namespace nlh {

CapacityProblem CapacityProblem::scaled(double c) const {
  CapacityProblem p = *this;
  p.w0 *= c;
  p.w1 *= c;
  return p;
}

std::vector<int> clamp_set(const MetricMeasureSpace& space, const std::vector<int>& target) {
  const double reach = space.min_separation() * (1.0 + 1e-9);
  std::vector<int> out;
  for (int x = 0; x < space.size(); ++x)
    for (int k : target)
      if (x == k || space.distance(x, k) <= reach) {
        out.push_back(x);
        break;
      }
  return out;
}

CapacityProblem make_capacity_problem(const MetricMeasureSpace& space, const WeightedComplex& cx,
                                      std::vector<int> target) {
  if (cx.top_degree() < 1) throw std::invalid_argument("capacity: complex needs degrees 0 and 1");
  const int n = space.size();
  if (static_cast<int>(cx.dim(0)) != n) throw std::invalid_argument("capacity: complex does not match the space");
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  for (int k : target)
    if (k < 0 || k >= n) throw std::invalid_argument("capacity: target index out of range");
  CapacityProblem p;
  p.w0 = cx.weights(0);
  p.w1 = cx.weights(1);
  p.b0 = cx.B(0);
  p.clamp = clamp_set(space, target);
  p.target = std::move(target);
  return p;
}

CapacityProblem make_capacity_problem(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                                      const KernelModel& kernel, std::vector<int> target) {
  return make_capacity_problem(space, WeightedComplex::build(space, system, kernel, 0), std::move(target));
}

Json CapacityResult::to_json() const {
  return Json{{"capacity", value},
              {"min_u", min_u},
              {"max_u", max_u},
              {"maximum_principle", maximum_principle},
              {"solver", solver},
              {"iterations", iterations}};
}

CapacityResult capacity(const CapacityProblem& problem) {
  if (problem.clamp.empty()) throw std::invalid_argument("capacity: clamp set is empty");
  const Eigen::Index n = problem.w0.size();
  Eigen::SparseMatrix<double> A = problem.b0.transpose() * problem.w1.asDiagonal() * problem.b0;
  for (Eigen::Index i = 0; i < n; ++i) A.coeffRef(i, i) += problem.w0(i);
  A.makeCompressed();

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (int k : problem.clamp) fixed[static_cast<std::size_t>(k)] = 1;
  std::vector<Eigen::Index> free_idx, pos(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!fixed[static_cast<std::size_t>(i)]) {
      pos[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(free_idx.size());
      free_idx.push_back(i);
    }

  CapacityResult res;
  res.u = Eigen::VectorXd::Zero(n);
  for (int k : problem.clamp) res.u(k) = 1.0;
  const Eigen::Index m = static_cast<Eigen::Index>(free_idx.size());
  res.solver = "none";
  if (m > 0) {
    // A_FF u_F = -A_FC 1
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index c = 0; c < A.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
        Eigen::Index r = pos[static_cast<std::size_t>(it.row())];
        if (r < 0) continue;
        Eigen::Index cc = pos[static_cast<std::size_t>(it.col())];
        if (cc >= 0)
          trips.emplace_back(r, cc, it.value());
        else
          rhs(r) -= it.value();
      }
    Eigen::SparseMatrix<double> Aff(m, m);
    Aff.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd uf;
    if (m < 4000) {
      Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(Aff)};
      if (llt.info() != Eigen::Success) throw std::logic_error("capacity: system not positive definite");
      uf = llt.solve(rhs);
      res.solver = "llt";
    } else {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(Aff);
      cg.setTolerance(1e-10);
      cg.setMaxIterations(static_cast<Eigen::Index>(10 * m));
      uf = cg.solve(rhs);
      if (cg.info() != Eigen::Success) throw NumericalError("capacity: conjugate gradients did not converge", cg.error());
      res.solver = "cg";
      res.iterations = static_cast<int>(cg.iterations());
    }
    for (Eigen::Index k = 0; k < m; ++k) res.u(free_idx[static_cast<std::size_t>(k)]) = uf(k);
  }
  res.value = res.u.dot(A * res.u);
  res.min_u = res.u.minCoeff();
  res.max_u = res.u.maxCoeff();
  res.maximum_principle = res.min_u >= -1e-9 && res.max_u <= 1.0 + 1e-9;
  return res;
}

const AlphaVerdict& SweepReport::verdict_for(double alpha) const {
  for (const auto& v : verdicts)
    if (v.alpha == alpha) return v;
  throw std::out_of_range("sweep: no such alpha");
}

std::string SweepReport::csv() const {
  std::ostringstream os;
  os << "resolution,alpha,epsilon,capacity,slope,verdict\n";
  for (const auto& r : rows) {
    const AlphaVerdict& v = verdict_for(r.alpha);
    os << r.resolution << ',' << format_double(r.alpha) << ',' << format_double(r.eps) << ','
       << format_double(r.capacity) << ',' << format_double(v.slope) << ',' << v.verdict << '\n';
  }
  return os.str();
}

Json SweepReport::to_json() const {
  Json rs = Json::array(), vs = Json::array();
  for (const auto& r : rows)
    rs.push_back(Json{{"resolution", r.resolution}, {"alpha", r.alpha}, {"epsilon", r.eps}, {"capacity", r.capacity}});
  for (const auto& v : verdicts)
    vs.push_back(Json{{"alpha", v.alpha},
                      {"slope", v.slope},
                      {"ratio", v.ratio},
                      {"monotone_decreasing", v.monotone_decreasing},
                      {"verdict", v.verdict}});
  return Json{{"schema", 1}, {"rows", rs}, {"verdicts", vs}};
}

SweepReport removability_sweep(const SweepConfig& config) {
  if (config.resolutions.empty() || config.alphas.empty()) throw std::invalid_argument("sweep: empty grid");
  const std::size_t R = config.resolutions.size(), A = config.alphas.size();
  SweepReport rep;
  rep.rows.resize(R * A);
  // one job per resolution; the complex's tuples are shared across alphas
  parallel_chunks(R, R, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t r = b; r < e; ++r) {
      const int n = config.resolutions[r];
      MetricMeasureSpace space = gen_interval(n);
      int hole = 0;
      for (int x = 1; x < n; ++x)
        if (std::abs(x / double(n - 1) - config.hole) < std::abs(hole / double(n - 1) - config.hole)) hole = x;
      auto system = NeighborhoodSystem::rips(config.eps);
      WeightedComplex base = WeightedComplex::build(space, system, KernelModel::fractional(config.d, config.alphas[0]), 0);
      for (std::size_t a = 0; a < A; ++a) {
        WeightedComplex cx = a == 0 ? base : base.reweighted(space, KernelModel::fractional(config.d, config.alphas[a]));
        CapacityResult c = capacity(make_capacity_problem(space, cx, {hole}));
        rep.rows[a * R + r] = SweepRow{n, config.alphas[a], config.eps, c.value};
      }
    }
  });
  for (std::size_t a = 0; a < A; ++a) {
    AlphaVerdict v;
    v.alpha = config.alphas[a];
    double sx = 0, sy = 0, sxx = 0, sxy = 0, lo = INFINITY, hi = 0;
    v.monotone_decreasing = true;
    for (std::size_t r = 0; r < R; ++r) {
      const SweepRow& row = rep.rows[a * R + r];
      double x = std::log(double(row.resolution)), y = std::log(row.capacity);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      lo = std::min(lo, row.capacity), hi = std::max(hi, row.capacity);
      if (r > 0 && !(row.capacity < rep.rows[a * R + r - 1].capacity)) v.monotone_decreasing = false;
    }
    double den = R * sxx - sx * sx;
    v.slope = (R > 1 && den > 0) ? (R * sxy - sx * sy) / den : 0.0;
    v.ratio = hi / lo;
    if (R < 2)
      v.verdict = "inconclusive";
    else if (v.slope < -0.2 && v.monotone_decreasing)
      v.verdict = "removable";
    else if (std::abs(v.alpha - config.d) < 0.05 * config.d)
      v.verdict = "inconclusive";
    else if (v.ratio < 1.25)
      v.verdict = "non-removable";
    else
      v.verdict = "inconclusive";
    rep.verdicts.push_back(v);
  }
  return rep;
}

}  // namespace nlh
