#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace nlh {

/// Function on points, one value per index.
using PointFunction = Eigen::VectorXd;

/**
 * Function on ordered tuples of point indices.  Arity is whatever the caller
 * passes; the helpers below work for any arity.
 */
using TupleFunction = std::function<double(std::span<const int>)>;

/// All permutations of {0..k-1} with their signs, in lexicographic order.
struct Permutations {
  int k = 0;
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};
const Permutations& permutations(int k);
double factorial(int k);

TupleFunction constant_function(double c);
/// f_0 (x) f_1 (x) ... : (x_0..x_p) -> prod f_i(x_i).
TupleFunction tensor(std::vector<PointFunction> fs);
/// prod_i chi(x_i), any arity.
TupleFunction tensor_power(PointFunction chi);
/// Mean of g over the entries.
TupleFunction average(PointFunction g);
/// (g cup F)(x_0..x_p) = g(x_0) F(x_0..x_p).
TupleFunction cup(PointFunction g, TupleFunction F);

TupleFunction alt(TupleFunction F);
TupleFunction sym(TupleFunction F);
/// Raw coboundary: (dF)(x_0..x_k) = sum_i (-1)^i F(.. omit x_i ..).
TupleFunction raw_coboundary(TupleFunction F);

TupleFunction product(TupleFunction a, TupleFunction b);
TupleFunction linear(double a, TupleFunction F, double b, TupleFunction G);

/// (1/p!) det[f_i(x_j) - f_i(x_0)], p = fs.size(), tuple of length p+1.
double determinant_form(std::span<const PointFunction> fs, std::span<const int> tuple);

}  // namespace nlh
