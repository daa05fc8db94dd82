#include "nlh/tuple_functions.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace nlh {

const Permutations& permutations(int k) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Permutations>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[k];
  if (!slot) {
    slot = std::make_unique<Permutations>();
    slot->k = k;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    do {
      int inversions = 0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          if (p[a] > p[b]) ++inversions;
      slot->perms.push_back(p);
      slot->signs.push_back(inversions % 2 ? -1 : 1);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return *slot;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

TupleFunction constant_function(double c) {
  return [c](std::span<const int>) { return c; };
}

TupleFunction tensor(std::vector<PointFunction> fs) {
  return [fs = std::move(fs)](std::span<const int> t) {
    if (t.size() != fs.size()) throw std::invalid_argument("tensor: arity mismatch");
    double v = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) v *= fs[i](t[i]);
    return v;
  };
}

TupleFunction tensor_power(PointFunction chi) {
  return [chi = std::move(chi)](std::span<const int> t) {
    double v = 1.0;
    for (int x : t) v *= chi(x);
    return v;
  };
}

TupleFunction average(PointFunction g) {
  return [g = std::move(g)](std::span<const int> t) {
    double s = 0.0;
    for (int x : t) s += g(x);
    return s / static_cast<double>(t.size());
  };
}

TupleFunction cup(PointFunction g, TupleFunction F) {
  return [g = std::move(g), F = std::move(F)](std::span<const int> t) { return g(t[0]) * F(t); };
}

namespace {

TupleFunction signed_average(TupleFunction F, bool with_sign) {
  return [F = std::move(F), with_sign](std::span<const int> t) {
    const auto& P = permutations(static_cast<int>(t.size()));
    std::vector<int> u(t.size());
    double s = 0.0;
    for (std::size_t k = 0; k < P.perms.size(); ++k) {
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = t[P.perms[k][i]];
      s += (with_sign ? P.signs[k] : 1) * F(u);
    }
    return s / static_cast<double>(P.perms.size());
  };
}

}  // namespace

TupleFunction alt(TupleFunction F) { return signed_average(std::move(F), true); }
TupleFunction sym(TupleFunction F) { return signed_average(std::move(F), false); }

TupleFunction raw_coboundary(TupleFunction F) {
  return [F = std::move(F)](std::span<const int> t) {
    std::vector<int> face(t.size() - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::size_t f = 0;
      for (std::size_t m = 0; m < t.size(); ++m)
        if (m != i) face[f++] = t[m];
      s += (i % 2 ? -1.0 : 1.0) * F(face);
    }
    return s;
  };
}

TupleFunction product(TupleFunction a, TupleFunction b) {
  return [a = std::move(a), b = std::move(b)](std::span<const int> t) { return a(t) * b(t); };
}

TupleFunction linear(double a, TupleFunction F, double b, TupleFunction G) {
  return [a, b, F = std::move(F), G = std::move(G)](std::span<const int> t) { return a * F(t) + b * G(t); };
}

double determinant_form(std::span<const PointFunction> fs, std::span<const int> t) {
  const int p = static_cast<int>(fs.size());
  if (static_cast<int>(t.size()) != p + 1) throw std::invalid_argument("determinant_form: arity mismatch");
  if (p == 0) return 1.0;
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 1; j <= p; ++j) m(i, j - 1) = fs[i](t[j]) - fs[i](t[0]);
  return m.determinant() / factorial(p);
}

}  // namespace nlh
