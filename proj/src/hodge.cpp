#include "nlh/hodge.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace nlh {

WeightedComplex::WeightedComplex(std::vector<std::shared_ptr<const TupleSet>> tuples,
                                 std::vector<Eigen::VectorXd> weights)
    : tuples_(std::move(tuples)), weights_(std::move(weights)) {
  if (tuples_.empty()) throw std::invalid_argument("WeightedComplex: no degrees");
  if (weights_.size() != tuples_.size()) throw std::invalid_argument("WeightedComplex: weights per degree");
  for (std::size_t p = 0; p < tuples_.size(); ++p) {
    if (!tuples_[p] || tuples_[p]->degree() != static_cast<int>(p))
      throw std::invalid_argument("WeightedComplex: tuple sets must have degrees 0,1,2,...");
    if (static_cast<std::size_t>(weights_[p].size()) != tuples_[p]->size())
      throw std::invalid_argument("WeightedComplex: weight count mismatch at degree " + std::to_string(p));
    for (Eigen::Index i = 0; i < weights_[p].size(); ++i)
      if (!(weights_[p](i) > 0.0) || !std::isfinite(weights_[p](i)))
        throw std::invalid_argument("WeightedComplex: weights must be positive and finite");
  }
  for (std::size_t p = 0; p + 1 < tuples_.size(); ++p) ops_.push_back(build_coboundary(*tuples_[p], *tuples_[p + 1]));
}

WeightedComplex WeightedComplex::build(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                                       const KernelModel& kernel, int p_max) {
  if (p_max < 0) throw std::invalid_argument("WeightedComplex::build: p_max must be >= 0");
  auto sets = enumerate_tuple_sets(space, system, p_max + 1);
  std::vector<std::shared_ptr<const TupleSet>> tuples;
  std::vector<Eigen::VectorXd> weights;
  for (auto& s : sets) {
    auto ptr = std::make_shared<const TupleSet>(std::move(s));
    weights.push_back(assemble_weights(kernel, space, *ptr).masses);
    tuples.push_back(std::move(ptr));
  }
  return WeightedComplex(std::move(tuples), std::move(weights));
}

WeightedComplex WeightedComplex::reweighted(const MetricMeasureSpace& space, const KernelModel& kernel) const {
  WeightedComplex out = *this;
  for (std::size_t p = 0; p < tuples_.size(); ++p) out.weights_[p] = assemble_weights(kernel, space, *tuples_[p]).masses;
  return out;
}

std::size_t WeightedComplex::dim(int p) const {
  if (p < 0 || p > top_degree()) return 0;
  return tuples_[static_cast<std::size_t>(p)]->size();
}

Eigen::SparseMatrix<double> WeightedComplex::B(int p) const {
  if (p >= 0 && p < top_degree()) return ops_[static_cast<std::size_t>(p)].real();
  return Eigen::SparseMatrix<double>(static_cast<Eigen::Index>(dim(p + 1)), static_cast<Eigen::Index>(dim(p)));
}

double WeightedComplex::inner(int p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return (weights(p).array() * a.array() * b.array()).sum();
}

namespace {

void require_laplacian_degree(const WeightedComplex& cx, int p) {
  if (p < 0 || p > cx.p_max())
    throw std::out_of_range("degree " + std::to_string(p) + " needs degree " + std::to_string(p + 1) +
                            "; the complex stops at " + std::to_string(cx.top_degree()));
}

Eigen::VectorXd weight_or_empty(const WeightedComplex& cx, int p) {
  if (p < 0 || p > cx.top_degree()) return Eigen::VectorXd();
  return cx.weights(p);
}

}  // namespace

Eigen::SparseMatrix<double> adjoint(const WeightedComplex& cx, int p) {
  if (p < 0 || p >= cx.top_degree()) throw std::out_of_range("adjoint: degree out of range");
  Eigen::SparseMatrix<double> bt = cx.B(p).transpose();
  Eigen::VectorXd wi = cx.weights(p).cwiseInverse();
  return wi.asDiagonal() * bt * cx.weights(p + 1).asDiagonal();
}

Eigen::SparseMatrix<double> symmetrized_coboundary(const WeightedComplex& cx, int p) {
  Eigen::SparseMatrix<double> b = cx.B(p);
  if (b.nonZeros() == 0) return b;
  Eigen::VectorXd up = weight_or_empty(cx, p + 1).cwiseSqrt();
  Eigen::VectorXd down = weight_or_empty(cx, p).cwiseSqrt().cwiseInverse();
  return up.asDiagonal() * b * down.asDiagonal();
}

Eigen::SparseMatrix<double> weighted_laplacian(const WeightedComplex& cx, int p) {
  require_laplacian_degree(cx, p);
  const auto n = static_cast<Eigen::Index>(cx.dim(p));
  Eigen::SparseMatrix<double> L(n, n);
  Eigen::SparseMatrix<double> up = adjoint(cx, p) * cx.B(p);
  L = up;
  if (p > 0) {
    Eigen::SparseMatrix<double> down = cx.B(p - 1) * adjoint(cx, p - 1);
    L += down;
  }
  return L;
}

Eigen::SparseMatrix<double> hodge_laplacian_sparse(const WeightedComplex& cx, int p) {
  require_laplacian_degree(cx, p);
  Eigen::SparseMatrix<double> a = symmetrized_coboundary(cx, p);
  Eigen::SparseMatrix<double> S = Eigen::SparseMatrix<double>(a.transpose()) * a;
  if (p > 0) {
    Eigen::SparseMatrix<double> c = symmetrized_coboundary(cx, p - 1);
    S += c * Eigen::SparseMatrix<double>(c.transpose());
  }
  S.makeCompressed();
  return S;
}

Eigen::MatrixXd hodge_laplacian(const WeightedComplex& cx, int p) {
  Eigen::MatrixXd S = Eigen::MatrixXd(hodge_laplacian_sparse(cx, p));
  // exact symmetry: the two triangles come from different products
  return 0.5 * (S + S.transpose());
}

double HodgeReport::smallest_nonzero() const {
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) >= tolerance && !(tolerance == 0.0 && eigenvalues(i) == 0.0)) return eigenvalues(i);
  return 0.0;
}

Json HodgeReport::to_json() const {
  Json eig = Json::array();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) eig.push_back(eigenvalues(i));
  Json j{{"degree", degree},
         {"dim", dim},
         {"eigenvalues", eig},
         {"complete_spectrum", complete_spectrum},
         {"harmonic_dim", harmonic_dim},
         {"tolerance", tolerance},
         {"gap_ratio", gap_ratio},
         {"uncertain", uncertain}};
  j["oracle_betti"] = oracle_betti ? Json(*oracle_betti) : Json(nullptr);
  j["agree"] = agree ? Json(*agree) : Json(nullptr);
  return j;
}

Eigen::VectorXd lowest_eigenvalues(const Eigen::SparseMatrix<double>& S, int count, double shift) {
  const Eigen::Index n = S.rows();
  count = static_cast<int>(std::min<Eigen::Index>(count, n));
  if (count <= 0) return Eigen::VectorXd();
  Eigen::SparseMatrix<double> M = S;
  for (Eigen::Index i = 0; i < n; ++i) M.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw NumericalError("shift-invert factorization failed", 0.0);

  // block Krylov space of (S + shift)^{-1}; blocks catch repeated eigenvalues
  const int b = count;
  std::mt19937_64 rng(20240607ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd block(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) block(i, j) = normal(rng);

  Eigen::MatrixXd V(n, 0);
  auto orthonormalize = [&](Eigen::MatrixXd X) {
    for (int pass = 0; pass < 2; ++pass)
      if (V.cols() > 0) X -= V * (V.transpose() * X);
    Eigen::MatrixXd Q(n, 0);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      Eigen::VectorXd v = X.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        if (V.cols() > 0) v -= V * (V.transpose() * v);
        if (Q.cols() > 0) v -= Q * (Q.transpose() * v);
      }
      double nv = v.norm();
      if (nv > 1e-10 * std::max(1.0, X.col(j).norm())) {
        Q.conservativeResize(n, Q.cols() + 1);
        Q.col(Q.cols() - 1) = v / nv;
      }
    }
    return Q;
  };

  Eigen::VectorXd prev, theta;
  Eigen::MatrixXd OpV(n, 0);
  Eigen::MatrixXd Q = orthonormalize(block);
  for (int step = 0; Q.cols() > 0; ++step) {
    Eigen::MatrixXd OQ(n, Q.cols());
    for (Eigen::Index j = 0; j < Q.cols(); ++j) OQ.col(j) = ldlt.solve(Eigen::VectorXd(Q.col(j)));
    Eigen::Index old = V.cols();
    V.conservativeResize(n, old + Q.cols());
    V.rightCols(Q.cols()) = Q;
    OpV.conservativeResize(n, old + Q.cols());
    OpV.rightCols(Q.cols()) = OQ;
    Eigen::MatrixXd T = V.transpose() * OpV;
    T = 0.5 * (T + T.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    theta = es.eigenvalues().tail(std::min<Eigen::Index>(count, T.rows())).reverse();
    if (theta.size() == count && prev.size() == count &&
        ((theta - prev).cwiseAbs().array() <= 1e-14 * theta.cwiseAbs().array()).all() && step >= 2)
      break;
    prev = theta;
    if (V.cols() >= n) break;
    Q = orthonormalize(OQ);
  }
  Eigen::VectorXd lam(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) lam(i) = std::max(0.0, 1.0 / theta(i) - shift);
  std::sort(lam.data(), lam.data() + lam.size());
  return lam;
}

namespace {

double estimate_lambda_max(const Eigen::SparseMatrix<double>& S) {
  const Eigen::Index n = S.rows();
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.001 * static_cast<double>(i % 97);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = S * v;
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lam = v.dot(w);
    v = w / nw;
  }
  // Gershgorin keeps the estimate on the safe side
  double gersh = 0.0;
  for (Eigen::Index k = 0; k < S.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, k); it; ++it) row += std::abs(it.value());
    gersh = std::max(gersh, row);
  }
  return std::min(gersh, std::max(lam, 0.0) * 1.01);
}

void classify(HodgeReport& r, double lambda_max, const TolerancePolicy& policy) {
  const double tiny = lambda_max * std::ldexp(1.0, -52);
  r.tolerance = policy.fixed ? *policy.fixed : static_cast<double>(r.dim) * lambda_max * std::ldexp(1.0, -45);
  r.harmonic_dim = 0;
  double lower = 0.0;
  std::optional<double> upper;
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    double l = r.eigenvalues(i);
    bool zero = lambda_max == 0.0 ? true : l < r.tolerance;
    if (zero) {
      ++r.harmonic_dim;
      lower = std::max(lower, std::abs(l));
    } else if (!upper) {
      upper = l;
    }
  }
  if (!upper) {
    r.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    r.gap_ratio = *upper / std::max({lower, tiny, std::numeric_limits<double>::min()});
  }
  r.uncertain = r.gap_ratio < policy.gap_factor;
}

}  // namespace

HodgeReport harmonic_dimension(const WeightedComplex& cx, int p, const TolerancePolicy& policy) {
  require_laplacian_degree(cx, p);
  HodgeReport r;
  r.degree = p;
  r.dim = cx.dim(p);
  if (r.dim == 0) {
    r.gap_ratio = std::numeric_limits<double>::infinity();
    return r;
  }
  Eigen::SparseMatrix<double> S = hodge_laplacian_sparse(cx, p);
  if (r.dim <= policy.dense_limit) {
    Eigen::MatrixXd D = Eigen::MatrixXd(S);
    D = 0.5 * (D + D.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    r.eigenvalues = es.eigenvalues();
    double lmax = r.eigenvalues.cwiseAbs().maxCoeff();
    classify(r, lmax, policy);
    return r;
  }
  r.complete_spectrum = false;
  const double lmax = estimate_lambda_max(S);
  const double shift = std::max(lmax * std::ldexp(1.0, -30), std::numeric_limits<double>::min());
  int count = policy.lanczos_count;
  for (;;) {
    r.eigenvalues = lowest_eigenvalues(S, count, shift);
    classify(r, lmax, policy);
    bool saw_upper = r.harmonic_dim < r.eigenvalues.size();
    if (saw_upper || static_cast<std::size_t>(count) >= r.dim) break;
    count *= 2;
  }
  return r;
}

namespace {

/// CG on the consistent normal equations A^T A x = A^T b (A given with its transpose).
Eigen::VectorXd normal_cg(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& At,
                          const Eigen::VectorXd& b, int& iterations) {
  Eigen::VectorXd rhs = At * b;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  const double rn0 = rhs.norm();
  if (rn0 == 0.0) return x;
  Eigen::VectorXd r = rhs, d = r;
  double rr = r.squaredNorm();
  const int max_it = 10 * static_cast<int>(std::max<Eigen::Index>(1, A.cols()));
  for (int it = 0; it < max_it; ++it) {
    Eigen::VectorXd Ad = A * d;
    double dAd = Ad.squaredNorm();
    if (dAd == 0.0) break;
    double a = rr / dAd;
    x += a * d;
    r -= a * (At * Ad);
    double rr2 = r.squaredNorm();
    ++iterations;
    if (std::sqrt(rr2) <= 1e-12 * rn0) {
      // confirm with the true residual
      Eigen::VectorXd tr = rhs - At * (A * x);
      if (tr.norm() <= 1e-12 * rn0) return x;
      r = tr;
      rr2 = r.squaredNorm();
      d = r;
      rr = rr2;
      continue;
    }
    d = r + (rr2 / rr) * d;
    rr = rr2;
  }
  Eigen::VectorXd tr = rhs - At * (A * x);
  double rel = tr.norm() / rn0;
  if (rel > 1e-12)
    throw NumericalError("conjugate gradients did not converge (relative residual " + std::to_string(rel) + ")",
                         rel);
  return x;
}

}  // namespace

HodgeDecomposition hodge_decompose(const WeightedComplex& cx, int p, const Eigen::VectorXd& F) {
  require_laplacian_degree(cx, p);
  if (static_cast<std::size_t>(F.size()) != cx.dim(p)) throw std::invalid_argument("hodge_decompose: size mismatch");
  HodgeDecomposition out;
  const Eigen::VectorXd s = cx.weights(p).cwiseSqrt();
  const Eigen::VectorXd f = s.cwiseProduct(F);
  const auto n = F.size();
  Eigen::VectorXd ex = Eigen::VectorXd::Zero(n), co = Eigen::VectorXd::Zero(n);
  if (p > 0) {
    Eigen::SparseMatrix<double> C = symmetrized_coboundary(cx, p - 1);
    Eigen::SparseMatrix<double> Ct = C.transpose();
    Eigen::VectorXd g = normal_cg(C, Ct, f, out.iterations);
    ex = C * g;
  }
  {
    Eigen::SparseMatrix<double> A = symmetrized_coboundary(cx, p);
    Eigen::SparseMatrix<double> At = A.transpose();
    // coexact part: A^T h with A A^T h = A f
    Eigen::VectorXd h = normal_cg(At, A, f, out.iterations);
    co = At * h;
  }
  Eigen::VectorXd harm = f - ex - co;
  const double fn = f.norm();
  out.harmonic = harm.cwiseQuotient(s);
  out.exact = ex.cwiseQuotient(s);
  out.coexact = co.cwiseQuotient(s);
  if (fn > 0.0) {
    out.reconstruction_residual = (out.harmonic + out.exact + out.coexact - F).cwiseProduct(s).norm() / fn;
    out.orthogonality_residual =
        std::max({std::abs(harm.dot(ex)), std::abs(harm.dot(co)), std::abs(ex.dot(co))}) / (fn * fn);
  }
  return out;
}

EnergyNorms energy_norms(const WeightedComplex& cx, int p, const Eigen::VectorXd& F) {
  require_laplacian_degree(cx, p);
  EnergyNorms e;
  e.l2 = cx.norm_squared(p, F);
  Eigen::VectorXd dF = cx.B(p) * F;
  e.dirichlet = cx.norm_squared(p + 1, dF);
  e.graph = e.l2 + e.dirichlet;
  return e;
}

Eigen::VectorXd carre_du_champ(const WeightedComplex& cx, const PointFunction& f) {
  const TupleSet& pts = cx.tuples(0);
  const auto n = static_cast<Eigen::Index>(pts.size());
  for (Eigen::Index i = 0; i < n; ++i)
    if (pts[static_cast<std::size_t>(i)][0] != i)
      throw std::invalid_argument("carre_du_champ: every point must be admissible at degree 0");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  if (cx.top_degree() < 1) return g;
  const TupleSet& pairs = cx.tuples(1);
  const Eigen::VectorXd& w0 = cx.weights(0);
  const Eigen::VectorXd& w1 = cx.weights(1);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    int x = pairs[k][0], y = pairs[k][1];
    double d2 = (f(y) - f(x)) * (f(y) - f(x));
    // degree-1 mass = (j(x,y) + j(y,x)) w_x w_y
    g(x) += d2 * w1(static_cast<Eigen::Index>(k)) / (2.0 * w0(x));
    g(y) += d2 * w1(static_cast<Eigen::Index>(k)) / (2.0 * w0(y));
  }
  return g;
}

MultiplierCheck multiplier_bound_check(const WeightedComplex& cx, int p, const PointFunction& chi,
                                       const Eigen::VectorXd& F) {
  MultiplierCheck m;
  Eigen::VectorXd G = F;
  const TupleSet& ts = cx.tuples(p);
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (int x : ts[i]) G(static_cast<Eigen::Index>(i)) *= chi(x);
  const double sup = chi.cwiseAbs().maxCoeff();
  const double gamma = carre_du_champ(cx, chi).maxCoeff();
  m.constant = std::pow(sup, p) * (1.0 + sup + (p + 1) * std::sqrt(gamma));
  m.lhs = std::sqrt(energy_norms(cx, p, G).graph);
  m.rhs = m.constant * std::sqrt(energy_norms(cx, p, F).graph);
  m.pass = m.lhs <= m.rhs * (1.0 + 1e-12);
  return m;
}

NormBound elementary_norm_bound(const WeightedComplex& cx, const PointFunction& g,
                                const std::vector<PointFunction>& fs, std::size_t i) {
  const int p = static_cast<int>(fs.size());
  if (p < 1 || i >= fs.size()) throw std::invalid_argument("elementary_norm_bound: bad arguments");
  NormBound nb;
  Cochain e = elementary_form(g, fs, cx.tuple_set(p));
  nb.lhs = std::sqrt(cx.norm_squared(p, e.values()));
  double rhs = g.cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    Eigen::VectorXd gam = carre_du_champ(cx, fs[k]);
    if (k == i)
      rhs *= std::sqrt(gam.dot(cx.weights(0)));
    else
      rhs *= std::sqrt(gam.maxCoeff());
  }
  nb.rhs = rhs;
  nb.pass = nb.lhs <= nb.rhs * (1.0 + 1e-12);
  return nb;
}

}  // namespace nlh
