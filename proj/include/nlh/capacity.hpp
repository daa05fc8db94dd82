#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "nlh/hodge.hpp"
#include "nlh/kernels.hpp"
#include "nlh/neighborhoods.hpp"
#include "nlh/space.hpp"

namespace nlh {

/**
 * Minimize u^T (W0 + B0^T W1 B0) u with u = 1 on the clamp set.
 * Fields are public so that masses can be rescaled directly.
 */
struct CapacityProblem {
  Eigen::VectorXd w0;               ///< point masses
  Eigen::VectorXd w1;               ///< pair masses
  Eigen::SparseMatrix<double> b0;   ///< pairs x points
  std::vector<int> target;
  std::vector<int> clamp;           ///< sorted, contains target
  std::size_t size() const { return static_cast<std::size_t>(w0.size()); }
  CapacityProblem scaled(double c) const;
};

/// Target plus every point within one mesh width (min separation) of it.
std::vector<int> clamp_set(const MetricMeasureSpace& space, const std::vector<int>& target);

/// Uses degrees 0 and 1 of the complex; the clamp set is derived from the target.
CapacityProblem make_capacity_problem(const MetricMeasureSpace& space, const WeightedComplex& cx,
                                      std::vector<int> target);
CapacityProblem make_capacity_problem(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                                      const KernelModel& kernel, std::vector<int> target);

struct CapacityResult {
  double value = 0.0;
  Eigen::VectorXd u;
  double min_u = 0.0, max_u = 0.0;
  bool maximum_principle = true;  ///< 0 <= u <= 1 up to 1e-9; diagnostic only
  std::string solver;             ///< "llt", "cg" or "none"
  int iterations = 0;
  Json to_json() const;
};

/// Throws std::invalid_argument on an empty clamp set.
CapacityResult capacity(const CapacityProblem& problem);

struct SweepConfig {
  std::vector<int> resolutions{50, 100, 200, 400, 800};
  double hole = 0.5;
  std::vector<double> alphas{0.5, 1.0, 1.5};
  double eps = 0.25;
  double d = 1.0;
};

struct SweepRow {
  int resolution = 0;
  double alpha = 0.0;
  double eps = 0.0;
  double capacity = 0.0;
};

struct AlphaVerdict {
  double alpha = 0.0;
  double slope = 0.0;   ///< least squares fit of log cap against log n
  double ratio = 0.0;   ///< max / min capacity over the ladder
  bool monotone_decreasing = false;
  std::string verdict;  ///< removable, non-removable, inconclusive
};

struct SweepReport {
  std::vector<SweepRow> rows;  ///< alpha-major, then resolution
  std::vector<AlphaVerdict> verdicts;
  const AlphaVerdict& verdict_for(double alpha) const;
  std::string csv() const;
  Json to_json() const;
};

/// Point hole at the interval grid point nearest `hole`, rips(eps) pairs, fractional kernel.
SweepReport removability_sweep(const SweepConfig& config);

}  // namespace nlh
