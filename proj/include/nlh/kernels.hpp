#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "nlh/neighborhoods.hpp"
#include "nlh/space.hpp"

namespace nlh {

enum class KernelKind { fractional, truncated_fractional, constant, custom };

/// Jump kernel j(x, y) on pairs of distinct points.
class KernelModel {
 public:
  /// c_pre * rho^(-d-alpha), alpha in (0,2), d > 0.
  static KernelModel fractional(double d, double alpha, double c_pre = 1.0);
  /// Fractional below eps_trunc, `floor` (default 0) at or beyond it.
  static KernelModel truncated_fractional(double d, double alpha, double eps_trunc, double c_pre = 1.0,
                                          double floor = 0.0);
  static KernelModel constant(double c);
  /// Off-diagonal entries of `table` are the kernel; they must be positive.
  static KernelModel custom(Eigen::MatrixXd table);

  /// The same kernel multiplied by c > 0.
  KernelModel scaled(double c) const;

  KernelKind kind() const { return kind_; }
  double d() const { return d_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  bool symmetric() const { return symmetric_; }
  std::string name() const;

  /// Kernel value, i != j (not checked here; see eval_kernel).
  double value(const MetricMeasureSpace& space, int i, int j) const;

 private:
  KernelKind kind_ = KernelKind::constant;
  double d_ = 0.0, alpha_ = 0.0, scale_ = 1.0, eps_trunc_ = 0.0, floor_ = 0.0;
  bool symmetric_ = true;
  std::shared_ptr<const Eigen::MatrixXd> table_;
};

/// Kernel value with the diagonal excluded.
double eval_kernel(const KernelModel& model, const MetricMeasureSpace& space, int i, int j);

/// "i, j, value" triples covering all unordered pairs of an n-point space.
KernelModel parse_kernel_table(const std::string& text, int n);
KernelModel load_kernel_table(const std::string& path, int n);

/// Raised when a tuple mass is not a positive finite number.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeightAssignment {
  int degree = 0;
  Eigen::VectorXd masses;
  /// (p+1)!: number of ordered representatives folded into each mass.
  double multiplicity = 1.0;
};

/// Symmetrized density (1/(p+1)) sum_k prod_{l != k} j(x_k, x_l) * prod_m w_m at an ordered tuple.
double tuple_density(const KernelModel& model, const MetricMeasureSpace& space, std::span<const int> tuple);

WeightAssignment assemble_weights(const KernelModel& model, const MetricMeasureSpace& space,
                                  const TupleSet& tuples);

struct KernelConditionReport {
  double near_moment_sup = 0.0;  ///< sup_x sum_{rho < eps} rho^2 j w
  double far_tail_sup = 0.0;     ///< sup_x sum_{rho >= eps} j w
  double admissible_inf = 0.0;   ///< min of j over pairs with rho < eps
  double admissible_sup = 0.0;
  std::size_t admissible_pairs = 0;
  bool vacuous = false;  ///< no admissible pair
  Json to_json() const;
};

KernelConditionReport check_kernel_conditions(const KernelModel& model, const MetricMeasureSpace& space,
                                              double eps);

}  // namespace nlh
