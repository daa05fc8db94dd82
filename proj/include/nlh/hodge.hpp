#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlh/cochains.hpp"
#include "nlh/kernels.hpp"
#include "nlh/neighborhoods.hpp"
#include "nlh/space.hpp"

namespace nlh {

/// An iterative solve did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/**
 * Tuple sets, diagonal Gram weights and integer coboundaries for degrees
 * 0..top_degree().  A complex built for p_max carries one extra degree so
 * that the Laplacian at p_max sees its up part.
 */
class WeightedComplex {
 public:
  WeightedComplex(std::vector<std::shared_ptr<const TupleSet>> tuples, std::vector<Eigen::VectorXd> weights);

  static WeightedComplex build(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                               const KernelModel& kernel, int p_max);
  /// Same tuple sets and coboundaries, masses recomputed for another kernel.
  WeightedComplex reweighted(const MetricMeasureSpace& space, const KernelModel& kernel) const;

  int top_degree() const { return static_cast<int>(tuples_.size()) - 1; }
  /// Highest degree with a complete Laplacian.
  int p_max() const { return top_degree() - 1; }
  std::size_t dim(int p) const;

  const TupleSet& tuples(int p) const { return *tuples_.at(static_cast<std::size_t>(p)); }
  const std::shared_ptr<const TupleSet>& tuple_set(int p) const { return tuples_.at(static_cast<std::size_t>(p)); }
  const Eigen::VectorXd& weights(int p) const { return weights_.at(static_cast<std::size_t>(p)); }
  /// Integer coboundary from degree p, 0 <= p < top_degree().
  const CoboundaryOperator& coboundary(int p) const { return ops_.at(static_cast<std::size_t>(p)); }
  /// Real coboundary dim(p+1) x dim(p); an empty matrix of the right shape out of range.
  Eigen::SparseMatrix<double> B(int p) const;

  double inner(int p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm_squared(int p, const Eigen::VectorXd& a) const { return inner(p, a, a); }

 private:
  std::vector<std::shared_ptr<const TupleSet>> tuples_;
  std::vector<Eigen::VectorXd> weights_;
  std::vector<CoboundaryOperator> ops_;
};

/// W_p^{-1} B_p^T W_{p+1}: degree p+1 -> degree p.
Eigen::SparseMatrix<double> adjoint(const WeightedComplex& cx, int p);
/// W_{p+1}^{1/2} B_p W_p^{-1/2}.
Eigen::SparseMatrix<double> symmetrized_coboundary(const WeightedComplex& cx, int p);
/// The Laplacian in cochain coordinates (not symmetric in general).
Eigen::SparseMatrix<double> weighted_laplacian(const WeightedComplex& cx, int p);
/// W^{1/2} L W^{-1/2}, symmetric positive semidefinite.
Eigen::SparseMatrix<double> hodge_laplacian_sparse(const WeightedComplex& cx, int p);
Eigen::MatrixXd hodge_laplacian(const WeightedComplex& cx, int p);

struct TolerancePolicy {
  /// Fixed threshold; automatic (dim * lambda_max * 2^-45) when absent.
  std::optional<double> fixed;
  /// Required ratio between the first eigenvalue above and the last below the threshold.
  double gap_factor = 1e3;
  /// Dense eigensolver up to this dimension, Lanczos above.
  std::size_t dense_limit = 5000;
  /// Eigenvalues requested from the iterative path (grown while no gap is found).
  int lanczos_count = 16;
};

struct HodgeReport {
  int degree = 0;
  std::size_t dim = 0;
  Eigen::VectorXd eigenvalues;  ///< ascending; only the low end on the Lanczos path
  bool complete_spectrum = true;
  int harmonic_dim = 0;
  double tolerance = 0.0;
  double gap_ratio = 0.0;
  bool uncertain = false;
  std::optional<int> oracle_betti;
  std::optional<bool> agree;
  /// Smallest eigenvalue at or above the threshold, 0 if none.
  double smallest_nonzero() const;
  Json to_json() const;
};

HodgeReport harmonic_dimension(const WeightedComplex& cx, int p, const TolerancePolicy& policy = {});

/**
 * Lowest `count` eigenpairs of a sparse SPD-ish matrix by Lanczos with full
 * reorthogonalization on (S + shift I)^{-1}.  Deterministic start vector.
 */
Eigen::VectorXd lowest_eigenvalues(const Eigen::SparseMatrix<double>& S, int count, double shift);

struct HodgeDecomposition {
  Eigen::VectorXd harmonic, exact, coexact;
  double reconstruction_residual = 0.0;  ///< relative to |F|
  double orthogonality_residual = 0.0;   ///< max pairwise |<a,b>| / |F|^2
  int iterations = 0;
};

/// F = H + dG1 + d*G2 in the weighted metric; throws NumericalError on CG failure.
HodgeDecomposition hodge_decompose(const WeightedComplex& cx, int p, const Eigen::VectorXd& F);

struct EnergyNorms {
  double l2 = 0.0;         ///< |F|^2
  double dirichlet = 0.0;  ///< Q_p(F) = |dF|^2
  double graph = 0.0;      ///< sum of both
};
EnergyNorms energy_norms(const WeightedComplex& cx, int p, const Eigen::VectorXd& F);

/// sup_x sum_{y adjacent} (f(y)-f(x))^2 j(x,y) w_y, from the degree-1 masses.
Eigen::VectorXd carre_du_champ(const WeightedComplex& cx, const PointFunction& f);

struct MultiplierCheck {
  double lhs = 0.0;       ///< graph norm of chi^(p+1) F
  double rhs = 0.0;       ///< constant * graph norm of F
  double constant = 0.0;  ///< c_{chi,p}
  bool pass = false;
};
MultiplierCheck multiplier_bound_check(const WeightedComplex& cx, int p, const PointFunction& chi,
                                       const Eigen::VectorXd& F);

struct NormBound {
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
};
/// |g-bar d Alt(f_1..f_p)| against the product bound with the integrated factor at index i.
NormBound elementary_norm_bound(const WeightedComplex& cx, const PointFunction& g,
                                const std::vector<PointFunction>& fs, std::size_t i);

}  // namespace nlh
