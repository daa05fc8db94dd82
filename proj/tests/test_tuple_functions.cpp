#include <doctest.h>

#include <random>

#include "nlh/tuple_functions.hpp"
#include "oracles.hpp"

using namespace nlh;

namespace {

PointFunction rnd(int n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1, 1);
  PointFunction f(n);
  for (int i = 0; i < n; ++i) f(i) = u(g);
  return f;
}

/// Alt by an explicit permutation sum with inversion signs.
double alt_oracle(const TupleFunction& F, std::vector<int> x) {
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  double total = 0.0, count = 0.0;
  do {
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[static_cast<std::size_t>(idx[i])];
    total += oracle::sign(idx) * F(y);
    count += 1;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return total / count;
}

}  // namespace

TEST_CASE("permutation tables") {
  CHECK(permutations(3).perms.size() == 6);
  for (int k = 1; k <= 4; ++k) {
    const auto& P = permutations(k);
    for (std::size_t i = 0; i < P.perms.size(); ++i) CHECK(P.signs[i] == oracle::sign(P.perms[i]));
  }
  CHECK(factorial(5) == 120.0);
}

TEST_CASE("Alt and Sym agree with explicit permutation sums") {
  std::mt19937_64 g(7);
  const int n = 8;
  for (int p = 0; p <= 3; ++p) {
    std::vector<PointFunction> fs;
    for (int k = 0; k <= p; ++k) fs.push_back(rnd(n, g));
    TupleFunction T = tensor(fs);
    std::vector<int> x{4, 1, 6, 2};
    x.resize(static_cast<std::size_t>(p + 1));
    CHECK(alt(T)(x) == doctest::Approx(alt_oracle(T, x)));
    std::vector<int> rep = x;
    if (p > 0) {
      rep[1] = rep[0];
      CHECK(alt(T)(rep) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
  TupleFunction s = sym(tensor({rnd(n, g), rnd(n, g)}));
  std::vector<int> a{1, 2}, b{2, 1};
  CHECK(s(a) == doctest::Approx(s(b)));
}

TEST_CASE("raw coboundary and products") {
  std::mt19937_64 g(3);
  PointFunction f = rnd(6, g), h = rnd(6, g);
  std::vector<int> x{1, 4};
  CHECK(raw_coboundary(tensor({f}))(x) == doctest::Approx(f(4) - f(1)));
  std::vector<int> y{0, 2, 5};
  TupleFunction T = tensor({f, h});
  CHECK(raw_coboundary(T)(y) == doctest::Approx(T(std::vector<int>{2, 5}) - T(std::vector<int>{0, 5}) + T(std::vector<int>{0, 2})));
  CHECK(product(tensor({f}), tensor({h}))(std::vector<int>{3}) == doctest::Approx(f(3) * h(3)));
  CHECK(linear(2.0, tensor({f}), -1.0, tensor({h}))(std::vector<int>{3}) == doctest::Approx(2 * f(3) - h(3)));
  CHECK(cup(f, tensor({h, h}))(x) == doctest::Approx(f(1) * h(1) * h(4)));
  CHECK(average(f)(y) == doctest::Approx((f(0) + f(2) + f(5)) / 3));
  CHECK(tensor_power(f)(y) == doctest::Approx(f(0) * f(2) * f(5)));
  CHECK(constant_function(2.5)(y) == 2.5);
}

TEST_CASE("coboundary of Alt of a tensor is a determinant") {
  std::mt19937_64 g(11);
  const int n = 9;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 2;
    std::vector<PointFunction> fs;
    for (int k = 0; k < p; ++k) fs.push_back(rnd(n, g));
    std::vector<int> x(static_cast<std::size_t>(n));
    std::iota(x.begin(), x.end(), 0);
    std::shuffle(x.begin(), x.end(), g);
    x.resize(static_cast<std::size_t>(p + 1));
    double lhs = raw_coboundary(alt(tensor(fs)))(x);
    // explicit expansion: (p+1) Alt(1 (x) f_1 (x) ... (x) f_p)
    std::vector<PointFunction> with_one{PointFunction::Ones(n)};
    for (const auto& f : fs) with_one.push_back(f);
    CHECK(lhs == doctest::Approx((p + 1) * alt_oracle(tensor(with_one), x)).epsilon(1e-10));
    CHECK(determinant_form(fs, x) == doctest::Approx(lhs).epsilon(1e-10));
  }
}
