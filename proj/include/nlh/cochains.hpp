#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>

#include "nlh/neighborhoods.hpp"
#include "nlh/tuple_functions.hpp"

namespace nlh {

/// Face closure broken: a face of an admissible tuple is missing.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available for this configuration.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Antisymmetric function on admissible tuples, stored by its values on the
 * sorted tuples of a TupleSet.
 */
class Cochain {
 public:
  Cochain(std::shared_ptr<const TupleSet> tuples, Eigen::VectorXd values);
  static Cochain zero(std::shared_ptr<const TupleSet> tuples);

  int degree() const { return tuples_->degree(); }
  std::size_t size() const { return tuples_->size(); }
  const TupleSet& tuples() const { return *tuples_; }
  const std::shared_ptr<const TupleSet>& tuple_set() const { return tuples_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  /// Value at an ordered tuple: 0 on repeated entries, nullopt if not admissible.
  std::optional<double> try_at(std::span<const int> ordered) const;
  /// As try_at, but throws std::out_of_range when the tuple is not admissible.
  double at(std::span<const int> ordered) const;
  /// Ordered-tuple evaluator, 0 outside the admissible set.
  TupleFunction as_function() const;

  Json to_json() const;

 private:
  std::shared_ptr<const TupleSet> tuples_;
  Eigen::VectorXd values_;
};

/// Signed incidence matrix from degree p to degree p+1.
struct CoboundaryOperator {
  int degree = 0;
  Eigen::SparseMatrix<int, Eigen::RowMajor> matrix;
  Eigen::SparseMatrix<double> real() const { return matrix.cast<double>(); }
};

/// Throws StructuralError when some face of an upper tuple is missing from lower.
CoboundaryOperator build_coboundary(const TupleSet& lower, const TupleSet& upper);

Cochain coboundary_apply(const CoboundaryOperator& op, const Cochain& F, std::shared_ptr<const TupleSet> upper);

/// Sorted-tuple values of Alt F.
Cochain alt_project(const TupleFunction& F, std::shared_ptr<const TupleSet> tuples);

/// g-bar * (1/p!) det[f_i(x_j) - f_i(x_0)]; p = fs.size() >= 1.
Cochain elementary_form(const PointFunction& g, std::span<const PointFunction> fs,
                        std::shared_ptr<const TupleSet> tuples);

/// Multiply by prod_m chi(x_m).
Cochain multiply_power(const PointFunction& chi, const Cochain& F);

/// g-bar * F.
Cochain cup_average(const PointFunction& g, const Cochain& F);

/**
 * G(x_0..x_{p-1}) = F(apex, x_0..x_{p-1}).  Needs every apex-augmented tuple to
 * be admissible (full systems); otherwise UnsupportedError.
 */
Cochain cone_contraction(const Cochain& F, int apex, std::shared_ptr<const TupleSet> lower);

}  // namespace nlh
