#pragma once
// Brute-force reference implementations used only by the tests.  They share
// no code with the library beyond the space container.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "nlh/space.hpp"

namespace oracle {

using Tuple = std::vector<int>;
using Admit = std::function<bool(const Tuple&)>;

/// Every strictly increasing tuple of length p+1 over 0..n-1 accepted by `admit`.
inline std::vector<Tuple> tuples(int n, int p, const Admit& admit) {
  std::vector<Tuple> out;
  Tuple t(static_cast<std::size_t>(p + 1));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == p + 1) {
      if (admit(t)) out.push_back(t);
      return;
    }
    for (int v = start; v < n; ++v) {
      t[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline Admit rips(const nlh::MetricMeasureSpace& s, double eps) {
  return [&s, eps](const Tuple& t) {
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b)
        if (!(s.distance(t[a], t[b]) < eps)) return false;
    return true;
  };
}

inline Admit hausdorff(const nlh::MetricMeasureSpace& s, double eps) {
  return [&s, eps](const Tuple& t) {
    for (int y = 0; y < s.size(); ++y) {
      bool ok = true;
      for (int x : t) ok = ok && s.distance(x, y) <= eps;
      if (ok) return true;
    }
    return false;
  };
}

inline Admit everything() {
  return [](const Tuple&) { return true; };
}

/// Dense signed incidence matrix built from a map of tuples.
inline Eigen::MatrixXd coboundary(const std::vector<Tuple>& lower, const std::vector<Tuple>& upper) {
  std::map<Tuple, int> index;
  for (std::size_t i = 0; i < lower.size(); ++i) index[lower[i]] = static_cast<int>(i);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(upper.size()),
                                            static_cast<Eigen::Index>(lower.size()));
  for (std::size_t r = 0; r < upper.size(); ++r)
    for (std::size_t k = 0; k < upper[r].size(); ++k) {
      Tuple f = upper[r];
      f.erase(f.begin() + static_cast<long>(k));
      m(static_cast<Eigen::Index>(r), index.at(f)) += (k % 2) ? -1.0 : 1.0;
    }
  return m;
}

/// Rank by column-pivoted QR; fine for the small integer matrices in tests.
inline int rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

/// Betti numbers 0..p_max of the complex cut out by `admit`.
inline std::vector<int> betti(int n, int p_max, const Admit& admit) {
  std::vector<std::vector<Tuple>> ts;
  for (int p = 0; p <= p_max + 1; ++p) ts.push_back(tuples(n, p, admit));
  std::vector<int> ranks;
  for (int p = 0; p <= p_max; ++p) ranks.push_back(rank(coboundary(ts[static_cast<std::size_t>(p)], ts[static_cast<std::size_t>(p) + 1])));
  std::vector<int> b;
  for (int p = 0; p <= p_max; ++p)
    b.push_back(static_cast<int>(ts[static_cast<std::size_t>(p)].size()) - ranks[static_cast<std::size_t>(p)] -
                (p > 0 ? ranks[static_cast<std::size_t>(p) - 1] : 0));
  return b;
}

/**
 * Mass of a sorted tuple as a sum over all orderings of the one-sided density
 * prod_{l>0} j(x_0, x_l) prod_m w_m.
 */
inline double mass(const nlh::MetricMeasureSpace& s, const std::function<double(int, int)>& j, Tuple t) {
  std::sort(t.begin(), t.end());
  double wprod = 1.0;
  for (int x : t) wprod *= s.weight(x);
  double total = 0.0;
  do {
    double v = 1.0;
    for (std::size_t l = 1; l < t.size(); ++l) v *= j(t[0], t[l]);
    total += v;
  } while (std::next_permutation(t.begin(), t.end()));
  return total * wprod;
}

/// Sign of the permutation sorting `t` (0 on repeats), by counting inversions.
inline int sign(const Tuple& t) {
  int inv = 0;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      if (t[a] == t[b]) return 0;
      if (t[a] > t[b]) ++inv;
    }
  return inv % 2 ? -1 : 1;
}

inline bool is_prime(long long v) {
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

}  // namespace oracle
