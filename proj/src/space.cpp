#include "nlh/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <limits>
#include <sstream>

namespace nlh {

namespace {

std::string pair_str(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

double parse_number(const std::string& raw, int line, int column) {
  std::string tok = raw;
  tok.erase(0, tok.find_first_not_of(" \t\r"));
  tok.erase(tok.find_last_not_of(" \t\r") + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (tok.empty() || used != tok.size())
    throw LoadError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": not a number: '" + tok + "'");
  if (!std::isfinite(v))
    throw LoadError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": non-finite value");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MetricMeasureSpace from_line(const std::vector<double>& xs, Eigen::VectorXd weights, SpaceMetadata meta) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(xs[i] - xs[j]);
  return MetricMeasureSpace(std::move(d), std::move(weights), std::move(meta), {}, false);
}

}  // namespace

void validate_metric(const Eigen::MatrixXd& dist, const Eigen::VectorXd& weights, bool triangle) {
  const int n = static_cast<int>(dist.rows());
  if (dist.cols() != n) throw LoadError("distance matrix is not square");
  if (n == 0) throw LoadError("empty space");
  if (weights.size() != n)
    throw LoadError("expected " + std::to_string(n) + " weights, got " + std::to_string(weights.size()));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(weights(i)) || weights(i) <= 0.0)
      throw LoadError("weight " + std::to_string(i) + " is not a positive finite number", {i});
  }
  for (int i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw LoadError("nonzero diagonal at " + pair_str(i, i), {i, i});
    for (int j = i + 1; j < n; ++j) {
      double a = dist(i, j), b = dist(j, i);
      if (!std::isfinite(a) || !std::isfinite(b))
        throw LoadError("non-finite distance at " + pair_str(i, j), {i, j});
      if (a < 0.0 || b < 0.0) throw LoadError("negative distance at " + pair_str(i, j), {i, j});
      if (std::abs(a - b) > 1e-12) throw LoadError("asymmetric distance at " + pair_str(i, j), {i, j});
      if (a == 0.0) throw LoadError("coincident points " + pair_str(i, j), {i, j});
    }
  }
  if (!triangle) return;
  const double tol = 1e-12 * std::max(1.0, dist.maxCoeff());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double dij = dist(i, j);
      for (int k = i + 1; k < n; ++k) {
        if (dist(k, i) > dij + dist(k, j) + tol)  // column access; symmetric by now
          throw LoadError("triangle inequality violated: d(" + std::to_string(i) + "," + std::to_string(k) +
                              ") > d(" + std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                              std::to_string(j) + "," + std::to_string(k) + ")",
                          {i, j, k});
      }
    }
  }
}

MetricMeasureSpace::MetricMeasureSpace(Eigen::MatrixXd dist, Eigen::VectorXd weights, SpaceMetadata meta,
                                       std::vector<std::string> labels, bool triangle)
    : dist_(std::move(dist)), weights_(std::move(weights)), meta_(std::move(meta)), labels_(std::move(labels)) {
  validate_metric(dist_, weights_, triangle);
  if (!labels_.empty() && static_cast<int>(labels_.size()) != size())
    throw std::invalid_argument("label count does not match point count");
  if (size() > 1 && min_separation() < 1e-9)
    warnings_.push_back("minimum separation below 1e-9; fractional kernels will be badly conditioned");
}

double MetricMeasureSpace::diameter() const { return dist_.maxCoeff(); }

double MetricMeasureSpace::min_separation() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) m = std::min(m, dist_(i, j));
  return m;
}

MetricMeasureSpace MetricMeasureSpace::permuted(std::span<const int> perm) const {
  const int n = size();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation has wrong length");
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = 1;
  }
  Eigen::MatrixXd d(n, n);
  Eigen::VectorXd w(n);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    w(i) = weights_(perm[i]);
    for (int j = 0; j < n; ++j) d(i, j) = dist_(perm[i], perm[j]);
    if (!labels_.empty()) labels.push_back(labels_[perm[i]]);
  }
  // relabeling preserves the metric axioms already checked
  return MetricMeasureSpace(std::move(d), std::move(w), meta_, std::move(labels), false);
}

MetricMeasureSpace MetricMeasureSpace::with_weights(Eigen::VectorXd weights) const {
  return MetricMeasureSpace(dist_, std::move(weights), meta_, labels_, false);
}

MetricMeasureSpace gen_circle(int n, double radius) {
  if (n < 3) throw std::invalid_argument("gen_circle: need n >= 3");
  if (!(radius > 0.0)) throw std::invalid_argument("gen_circle: radius must be positive");
  const double step = radius * (2.0 * std::numbers::pi / n);
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = std::abs(i - j);
      d(i, j) = step * std::min(k, n - k);
    }
  SpaceMetadata meta{"circle", {{"n", double(n)}, {"radius", radius}}, 1.0};
  return MetricMeasureSpace(std::move(d), Eigen::VectorXd::Constant(n, 2.0 * std::numbers::pi * radius / n),
                            std::move(meta), {}, false);
}

MetricMeasureSpace gen_interval(int n) {
  if (n < 2) throw std::invalid_argument("gen_interval: need n >= 2");
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = double(i) / (n - 1);
  return from_line(xs, Eigen::VectorXd::Constant(n, 1.0 / n), {"interval", {{"n", double(n)}}, 1.0});
}

MetricMeasureSpace gen_two_components(int n_each, double gap) {
  if (n_each < 2) throw std::invalid_argument("gen_two_components: need n_each >= 2");
  if (!(gap > 0.0)) throw std::invalid_argument("gen_two_components: gap must be positive");
  std::vector<double> xs;
  for (int i = 0; i < n_each; ++i) xs.push_back(double(i) / (n_each - 1));
  for (int i = 0; i < n_each; ++i) xs.push_back(1.0 + gap + double(i) / (n_each - 1));
  return from_line(xs, Eigen::VectorXd::Constant(2 * n_each, 1.0 / n_each),
                   {"two_components", {{"n_each", double(n_each)}, {"gap", gap}}, 1.0});
}

MetricMeasureSpace gen_punctured_interval(int n, double hole_center, double hole_radius) {
  if (n < 2) throw std::invalid_argument("gen_punctured_interval: need n >= 2");
  if (!(hole_center > 0.0 && hole_center < 1.0))
    throw std::invalid_argument("gen_punctured_interval: hole center must lie in (0,1)");
  if (!(hole_radius >= 0.0)) throw std::invalid_argument("gen_punctured_interval: negative hole radius");
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) {
    double x = double(i) / (n - 1);
    if (!(std::abs(x - hole_center) < hole_radius)) xs.push_back(x);
  }
  if (xs.size() < 2) throw std::invalid_argument("gen_punctured_interval: fewer than two points remain");
  const int m = static_cast<int>(xs.size());
  return from_line(xs, Eigen::VectorXd::Constant(m, 1.0 / n),
                   {"punctured_interval",
                    {{"n", double(n)}, {"hole_center", hole_center}, {"hole_radius", hole_radius}},
                    1.0});
}

MetricMeasureSpace gen_sphere(int n) {
  if (n < 4) throw std::invalid_argument("gen_sphere: need n >= 4");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::MatrixXd pts(n, 3);
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i;
    pts.row(i) << r * std::cos(th), r * std::sin(th), z;
  }
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      double c = std::clamp(pts.row(i).dot(pts.row(j)), -1.0, 1.0);
      d(i, j) = d(j, i) = std::acos(c);
    }
  }
  return MetricMeasureSpace(std::move(d), Eigen::VectorXd::Constant(n, 4.0 * std::numbers::pi / n),
                            {"sphere", {{"n", double(n)}}, 2.0}, {}, false);
}

Eigen::MatrixXd parse_distance_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    int col = 0;
    while (std::getline(ls, cell, ',')) row.push_back(parse_number(cell, lineno, ++col));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw LoadError("distance matrix is empty");
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw LoadError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) d(i, j) = rows[i][j];
  }
  return d;
}

Eigen::VectorXd parse_weights(const std::string& text) {
  std::vector<double> ws;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ws.push_back(parse_number(line, lineno, 1));
  }
  return Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
}

Eigen::VectorXd load_weights(const std::string& path) { return parse_weights(read_file(path)); }

MetricMeasureSpace load_distance_matrix(const std::string& path, const std::optional<Eigen::VectorXd>& weights) {
  Eigen::MatrixXd d = parse_distance_matrix(read_file(path));
  const int n = static_cast<int>(d.rows());
  Eigen::VectorXd w = weights ? *weights : Eigen::VectorXd::Constant(n, 1.0 / n);
  SpaceMetadata meta{"file", {{"n", double(n)}}, 0.0};
  return MetricMeasureSpace(std::move(d), std::move(w), std::move(meta));
}

}  // namespace nlh
