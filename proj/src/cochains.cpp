#include "nlh/cochains.hpp"

#include <sstream>

#include "nlh/parallel.hpp"

namespace nlh {

namespace {

std::string tuple_str(std::span<const int> t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << t[k];
  os << ")";
  return os.str();
}

}  // namespace

Cochain::Cochain(std::shared_ptr<const TupleSet> tuples, Eigen::VectorXd values)
    : tuples_(std::move(tuples)), values_(std::move(values)) {
  if (!tuples_) throw std::invalid_argument("Cochain: null tuple set");
  if (static_cast<std::size_t>(values_.size()) != tuples_->size())
    throw std::invalid_argument("Cochain: value count does not match tuple set");
}

Cochain Cochain::zero(std::shared_ptr<const TupleSet> tuples) {
  auto n = static_cast<Eigen::Index>(tuples->size());
  return Cochain(std::move(tuples), Eigen::VectorXd::Zero(n));
}

std::optional<double> Cochain::try_at(std::span<const int> ordered) const {
  auto [sorted, sign] = sort_with_sign(ordered);
  if (sign == 0) return 0.0;
  long idx = tuples_->index_of(sorted);
  if (idx < 0) return std::nullopt;
  return sign * values_(idx);
}

double Cochain::at(std::span<const int> ordered) const {
  auto v = try_at(ordered);
  if (!v) throw std::out_of_range("tuple " + tuple_str(ordered) + " is not admissible");
  return *v;
}

TupleFunction Cochain::as_function() const {
  Cochain self = *this;
  return [self](std::span<const int> t) { return self.try_at(t).value_or(0.0); };
}

Json Cochain::to_json() const {
  Json vals = Json::array();
  for (Eigen::Index i = 0; i < values_.size(); ++i) vals.push_back(values_(i));
  return Json{{"degree", degree()}, {"tuple_set_hash", tuples_->hash()}, {"values", vals}};
}

CoboundaryOperator build_coboundary(const TupleSet& lower, const TupleSet& upper) {
  if (upper.degree() != lower.degree() + 1) throw std::invalid_argument("build_coboundary: degree mismatch");
  const int w = upper.width();
  const std::size_t m = upper.size();
  const std::size_t chunks = default_chunks(m);
  std::vector<std::vector<Eigen::Triplet<int>>> parts(chunks);
  parallel_chunks(m, chunks, [&](std::size_t b, std::size_t e, std::size_t c) {
    std::vector<int> face(static_cast<std::size_t>(w - 1));
    for (std::size_t r = b; r < e; ++r) {
      auto t = upper[r];
      for (int k = 0; k < w; ++k) {
        int f = 0;
        for (int q = 0; q < w; ++q)
          if (q != k) face[f++] = t[q];
        long col = lower.index_of(face);
        if (col < 0)
          throw StructuralError("face " + tuple_str(face) + " of " + tuple_str(t) +
                                " is missing at degree " + std::to_string(lower.degree()));
        parts[c].emplace_back(static_cast<int>(r), static_cast<int>(col), (k % 2) ? -1 : 1);
      }
    }
  });
  std::vector<Eigen::Triplet<int>> trips;
  for (auto& p : parts) trips.insert(trips.end(), p.begin(), p.end());
  CoboundaryOperator op;
  op.degree = lower.degree();
  op.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(lower.size()));
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

Cochain coboundary_apply(const CoboundaryOperator& op, const Cochain& F, std::shared_ptr<const TupleSet> upper) {
  if (F.degree() != op.degree || upper->degree() != op.degree + 1 ||
      static_cast<std::size_t>(op.matrix.rows()) != upper->size() ||
      static_cast<std::size_t>(op.matrix.cols()) != F.size())
    throw std::invalid_argument("coboundary_apply: operator does not match cochain");
  Eigen::VectorXd v = op.real() * F.values();
  return Cochain(std::move(upper), std::move(v));
}

Cochain alt_project(const TupleFunction& F, std::shared_ptr<const TupleSet> tuples) {
  TupleFunction A = alt(F);
  Eigen::VectorXd v(static_cast<Eigen::Index>(tuples->size()));
  for (std::size_t i = 0; i < tuples->size(); ++i) v(static_cast<Eigen::Index>(i)) = A((*tuples)[i]);
  return Cochain(std::move(tuples), std::move(v));
}

Cochain elementary_form(const PointFunction& g, std::span<const PointFunction> fs,
                        std::shared_ptr<const TupleSet> tuples) {
  if (fs.empty()) throw std::invalid_argument("elementary_form: need p >= 1");
  if (static_cast<int>(fs.size()) != tuples->degree())
    throw std::invalid_argument("elementary_form: number of functions must equal the degree");
  Eigen::VectorXd v(static_cast<Eigen::Index>(tuples->size()));
  for (std::size_t i = 0; i < tuples->size(); ++i) {
    auto t = (*tuples)[i];
    double gbar = 0.0;
    for (int x : t) gbar += g(x);
    gbar /= static_cast<double>(t.size());
    v(static_cast<Eigen::Index>(i)) = gbar * determinant_form(fs, t);
  }
  return Cochain(std::move(tuples), std::move(v));
}

Cochain multiply_power(const PointFunction& chi, const Cochain& F) {
  Eigen::VectorXd v = F.values();
  for (std::size_t i = 0; i < F.size(); ++i)
    for (int x : F.tuples()[i]) v(static_cast<Eigen::Index>(i)) *= chi(x);
  return Cochain(F.tuple_set(), std::move(v));
}

Cochain cup_average(const PointFunction& g, const Cochain& F) {
  Eigen::VectorXd v = F.values();
  for (std::size_t i = 0; i < F.size(); ++i) {
    double s = 0.0;
    for (int x : F.tuples()[i]) s += g(x);
    v(static_cast<Eigen::Index>(i)) *= s / F.tuples().width();
  }
  return Cochain(F.tuple_set(), std::move(v));
}

Cochain cone_contraction(const Cochain& F, int apex, std::shared_ptr<const TupleSet> lower) {
  if (F.degree() == 0) throw UnsupportedError("cone_contraction: no degree -1");
  if (lower->degree() != F.degree() - 1) throw std::invalid_argument("cone_contraction: degree mismatch");
  Eigen::VectorXd v(static_cast<Eigen::Index>(lower->size()));
  std::vector<int> aug(static_cast<std::size_t>(F.degree() + 1));
  aug[0] = apex;
  for (std::size_t i = 0; i < lower->size(); ++i) {
    auto t = (*lower)[i];
    std::copy(t.begin(), t.end(), aug.begin() + 1);
    auto val = F.try_at(aug);
    if (!val)
      throw UnsupportedError("cone_contraction: " + tuple_str(aug) +
                             " is not admissible; the cone needs a full neighborhood system");
    v(static_cast<Eigen::Index>(i)) = *val;
  }
  return Cochain(std::move(lower), std::move(v));
}

}  // namespace nlh
