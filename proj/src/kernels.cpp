#include "nlh/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nlh/parallel.hpp"

namespace nlh {

namespace {

void check_fractional(double d, double alpha, double c) {
  if (!(d > 0.0)) throw std::invalid_argument("fractional kernel: d must be positive");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("fractional kernel: alpha must lie in (0,2)");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("kernel prefactor must be positive");
}

}  // namespace

KernelModel KernelModel::fractional(double d, double alpha, double c_pre) {
  check_fractional(d, alpha, c_pre);
  KernelModel k;
  k.kind_ = KernelKind::fractional;
  k.d_ = d;
  k.alpha_ = alpha;
  k.scale_ = c_pre;
  return k;
}

KernelModel KernelModel::truncated_fractional(double d, double alpha, double eps_trunc, double c_pre,
                                              double floor) {
  check_fractional(d, alpha, c_pre);
  if (!(eps_trunc > 0.0)) throw std::invalid_argument("truncated kernel: eps must be positive");
  if (!(floor >= 0.0)) throw std::invalid_argument("truncated kernel: floor must be >= 0");
  KernelModel k = fractional(d, alpha, c_pre);
  k.kind_ = KernelKind::truncated_fractional;
  k.eps_trunc_ = eps_trunc;
  k.floor_ = floor;
  return k;
}

KernelModel KernelModel::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant kernel must be positive");
  KernelModel k;
  k.kind_ = KernelKind::constant;
  k.scale_ = c;
  return k;
}

KernelModel KernelModel::custom(Eigen::MatrixXd table) {
  const auto n = table.rows();
  if (table.cols() != n) throw std::invalid_argument("custom kernel table must be square");
  bool sym = true;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!(table(i, j) > 0.0) || !std::isfinite(table(i, j)))
        throw std::invalid_argument("custom kernel entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is not positive");
      if (table(i, j) != table(j, i)) sym = false;
    }
  KernelModel k;
  k.kind_ = KernelKind::custom;
  k.symmetric_ = sym;
  k.table_ = std::make_shared<const Eigen::MatrixXd>(std::move(table));
  return k;
}

KernelModel KernelModel::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("kernel scale must be positive");
  KernelModel k = *this;
  k.scale_ *= c;
  k.floor_ *= c;
  return k;
}

std::string KernelModel::name() const {
  std::ostringstream os;
  switch (kind_) {
    case KernelKind::fractional: os << "fractional(d=" << d_ << ",alpha=" << alpha_ << ",c=" << scale_ << ")"; break;
    case KernelKind::truncated_fractional:
      os << "truncated_fractional(d=" << d_ << ",alpha=" << alpha_ << ",eps=" << eps_trunc_ << ",c=" << scale_
         << ")";
      break;
    case KernelKind::constant: os << "constant(" << scale_ << ")"; break;
    case KernelKind::custom: os << "custom(scale=" << scale_ << ")"; break;
  }
  return os.str();
}

double KernelModel::value(const MetricMeasureSpace& space, int i, int j) const {
  switch (kind_) {
    case KernelKind::constant: return scale_;
    case KernelKind::custom: return scale_ * (*table_)(i, j);
    case KernelKind::fractional: return scale_ * std::pow(space.distance(i, j), -d_ - alpha_);
    case KernelKind::truncated_fractional: {
      double rho = space.distance(i, j);
      return rho < eps_trunc_ ? scale_ * std::pow(rho, -d_ - alpha_) : floor_;
    }
  }
  return 0.0;
}

double eval_kernel(const KernelModel& model, const MetricMeasureSpace& space, int i, int j) {
  if (i < 0 || j < 0 || i >= space.size() || j >= space.size())
    throw std::invalid_argument("eval_kernel: index out of range");
  if (i == j) throw std::invalid_argument("eval_kernel: diagonal pair excluded");
  return model.value(space, i, j);
}

KernelModel parse_kernel_table(const std::string& text, int n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long i = -1, j = -1;
    double v = 0.0;
    std::string rest;
    if (!(ls >> i >> j >> v) || (ls >> rest))
      throw LoadError("kernel table line " + std::to_string(lineno) + ": expected 'i, j, value'");
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw LoadError("kernel table line " + std::to_string(lineno) + ": bad index pair", {int(i), int(j)});
    if (!std::isfinite(v) || v <= 0.0)
      throw LoadError("kernel table line " + std::to_string(lineno) + ": value must be positive and finite",
                      {int(i), int(j)});
    t(i, j) = v;
  }
  // one entry per unordered pair is enough for a symmetric table
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::isnan(t(i, j))) {
        if (std::isnan(t(j, i))) throw LoadError("kernel table: missing pair", {std::min(i, j), std::max(i, j)});
        t(i, j) = t(j, i);
      }
    }
  t.diagonal().setZero();
  return KernelModel::custom(std::move(t));
}

KernelModel load_kernel_table(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kernel_table(ss.str(), n);
}

double tuple_density(const KernelModel& model, const MetricMeasureSpace& space, std::span<const int> t) {
  const std::size_t w = t.size();
  double wprod = 1.0;
  for (int v : t) wprod *= space.weight(v);
  if (w == 1) return wprod;
  double sum = 0.0;
  for (std::size_t k = 0; k < w; ++k) {
    double prod = 1.0;
    for (std::size_t l = 0; l < w; ++l)
      if (l != k) prod *= model.value(space, t[k], t[l]);
    sum += prod;
  }
  return sum / static_cast<double>(w) * wprod;
}

WeightAssignment assemble_weights(const KernelModel& model, const MetricMeasureSpace& space,
                                  const TupleSet& tuples) {
  WeightAssignment out;
  out.degree = tuples.degree();
  double fact = 1.0;
  for (int k = 2; k <= tuples.width(); ++k) fact *= k;
  out.multiplicity = fact;
  out.masses.resize(static_cast<Eigen::Index>(tuples.size()));
  const std::size_t m = tuples.size();
  parallel_chunks(m, default_chunks(m), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      double v = fact * tuple_density(model, space, tuples[i]);
      if (!std::isfinite(v) || v <= 0.0) {
        std::ostringstream os;
        os << "mass of tuple (";
        for (std::size_t k = 0; k < tuples[i].size(); ++k) os << (k ? "," : "") << tuples[i][k];
        os << ") is " << v << " under " << model.name();
        throw AssemblyError(os.str());
      }
      out.masses(static_cast<Eigen::Index>(i)) = v;
    }
  });
  return out;
}

Json KernelConditionReport::to_json() const {
  return Json{{"near_moment_sup", near_moment_sup}, {"far_tail_sup", far_tail_sup},
              {"admissible_inf", admissible_inf},   {"admissible_sup", admissible_sup},
              {"admissible_pairs", admissible_pairs}, {"vacuous", vacuous}};
}

KernelConditionReport check_kernel_conditions(const KernelModel& model, const MetricMeasureSpace& space,
                                              double eps) {
  KernelConditionReport r;
  r.admissible_inf = std::numeric_limits<double>::infinity();
  const int n = space.size();
  for (int x = 0; x < n; ++x) {
    double near = 0.0, far = 0.0;
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      double rho = space.distance(x, y), j = model.value(space, x, y);
      if (rho < eps) {
        near += rho * rho * j * space.weight(y);
        r.admissible_inf = std::min(r.admissible_inf, j);
        r.admissible_sup = std::max(r.admissible_sup, j);
        if (y > x) ++r.admissible_pairs;
      } else {
        far += j * space.weight(y);
      }
    }
    r.near_moment_sup = std::max(r.near_moment_sup, near);
    r.far_tail_sup = std::max(r.far_tail_sup, far);
  }
  if (r.admissible_pairs == 0) {
    r.vacuous = true;
    r.admissible_inf = 0.0;
  }
  return r;
}

}  // namespace nlh
