#include "nlh/exact_rank.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <unordered_map>

namespace nlh {

IntColumns to_columns(const Eigen::SparseMatrix<int>& m) {
  IntColumns c;
  c.rows = m.rows();
  c.columns.resize(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<int>::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0) c.columns[static_cast<std::size_t>(k)].emplace_back(it.row(), it.value());
  return c;
}

IntColumns to_columns(const Eigen::SparseMatrix<int, Eigen::RowMajor>& m) {
  return to_columns(Eigen::SparseMatrix<int>(m));
}

namespace {

struct PrimeField {
  std::uint64_t p;
  using T = std::uint64_t;
  T from(long v) const {
    long r = v % static_cast<long>(p);
    return static_cast<T>(r < 0 ? r + static_cast<long>(p) : r);
  }
  bool zero(T a) const { return a == 0; }
  T sub(T a, T b) const { return a >= b ? a - b : a + p - b; }
  T mul(T a, T b) const { return a * b % p; }
  T inv(T a) const {
    T r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

struct RationalField {
  using T = boost::multiprecision::cpp_rational;
  T from(long v) const { return T(v); }
  bool zero(const T& a) const { return a == 0; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return T(1) / a; }
};

template <class Field>
std::size_t reduce_rank(const IntColumns& m, const Field& F) {
  using T = typename Field::T;
  using Col = std::vector<std::pair<long, T>>;
  std::unordered_map<long, Col> pivots;  // lowest row -> reduced column
  std::size_t rank = 0;
  Col col, tmp;
  for (const auto& src : m.columns) {
    col.clear();
    for (auto [r, v] : src) {
      T x = F.from(v);
      if (!F.zero(x)) col.emplace_back(r, x);
    }
    while (!col.empty()) {
      auto found = pivots.find(col.back().first);
      if (found == pivots.end()) {
        // normalise so the pivot entry is 1
        T s = F.inv(col.back().second);
        for (auto& e : col) e.second = F.mul(e.second, s);
        pivots.emplace(col.back().first, col);
        ++rank;
        break;
      }
      const Col& piv = found->second;
      T factor = col.back().second;  // pivot entry of piv is 1
      tmp.clear();
      std::size_t a = 0, b = 0;
      while (a < col.size() || b < piv.size()) {
        if (b == piv.size() || (a < col.size() && col[a].first < piv[b].first)) {
          tmp.push_back(col[a++]);
        } else if (a == col.size() || piv[b].first < col[a].first) {
          tmp.emplace_back(piv[b].first, F.sub(F.from(0), F.mul(factor, piv[b].second)));
          ++b;
        } else {
          T v = F.sub(col[a].second, F.mul(factor, piv[b].second));
          if (!F.zero(v)) tmp.emplace_back(col[a].first, v);
          ++a;
          ++b;
        }
      }
      std::swap(col, tmp);
    }
  }
  return rank;
}

}  // namespace

std::size_t rank_mod_prime(const IntColumns& m, std::uint32_t prime) {
  return reduce_rank(m, PrimeField{prime});
}

std::size_t rank_rational(const IntColumns& m) { return reduce_rank(m, RationalField{}); }

}  // namespace nlh
