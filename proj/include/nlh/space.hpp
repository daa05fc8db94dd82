#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlh {

/// Raised when a distance matrix or weight file fails validation.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& what, std::vector<int> indices = {})
      : std::runtime_error(what), indices_(std::move(indices)) {}
  /// Offending point indices (pair or triple), possibly empty.
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

struct SpaceMetadata {
  std::string generator = "custom";
  std::map<std::string, double> params;
  /// Regularity dimension d of the sampled object, 0 if unknown.
  double regularity_dim = 0.0;
};

/**
 * Finite metric measure space: symmetric distance matrix, positive point
 * masses.  Immutable once built; the constructor runs the full validator.
 */
class MetricMeasureSpace {
 public:
  /// `triangle` = false skips the O(n^3) triangle check; only for distances that are metric by construction.
  MetricMeasureSpace(Eigen::MatrixXd dist, Eigen::VectorXd weights, SpaceMetadata meta = {},
                     std::vector<std::string> labels = {}, bool triangle = true);

  int size() const { return static_cast<int>(weights_.size()); }
  double distance(int i, int j) const { return dist_(i, j); }
  double weight(int i) const { return weights_(i); }
  const Eigen::MatrixXd& distances() const { return dist_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const SpaceMetadata& metadata() const { return meta_; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Validation warnings (e.g. near-coincident points).
  const std::vector<std::string>& warnings() const { return warnings_; }

  double total_mass() const { return weights_.sum(); }
  double diameter() const;
  /// Smallest off-diagonal distance.
  double min_separation() const;

  /// The space with point i of the result equal to point perm[i] of this one.
  MetricMeasureSpace permuted(std::span<const int> perm) const;
  /// Same points, weights replaced (validated).
  MetricMeasureSpace with_weights(Eigen::VectorXd weights) const;

 private:
  Eigen::MatrixXd dist_;
  Eigen::VectorXd weights_;
  SpaceMetadata meta_;
  std::vector<std::string> labels_;
  std::vector<std::string> warnings_;
};

/// Checks the metric and weight invariants; throws LoadError naming indices.
void validate_metric(const Eigen::MatrixXd& dist, const Eigen::VectorXd& weights, bool triangle = true);

MetricMeasureSpace gen_circle(int n, double radius = 1.0);
MetricMeasureSpace gen_interval(int n);
MetricMeasureSpace gen_two_components(int n_each, double gap);
MetricMeasureSpace gen_punctured_interval(int n, double hole_center, double hole_radius);
/// Fibonacci points on the unit sphere, geodesic distance, weights 4π/n.
MetricMeasureSpace gen_sphere(int n);

/// Parse a comma separated square matrix.
Eigen::MatrixXd parse_distance_matrix(const std::string& text);
/// Parse one weight per line.
Eigen::VectorXd parse_weights(const std::string& text);

MetricMeasureSpace load_distance_matrix(const std::string& path,
                                        const std::optional<Eigen::VectorXd>& weights = std::nullopt);
Eigen::VectorXd load_weights(const std::string& path);

}  // namespace nlh
