#include "nlh/neighborhoods.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "nlh/parallel.hpp"

namespace nlh {

NeighborhoodSystem NeighborhoodSystem::full() { return {}; }

NeighborhoodSystem NeighborhoodSystem::rips(double eps, bool inclusive) {
  if (!(eps > 0.0)) throw std::invalid_argument("rips: eps must be positive");
  NeighborhoodSystem s;
  s.kind_ = SystemKind::rips;
  s.eps_ = eps;
  s.inclusive_ = inclusive;
  return s;
}

NeighborhoodSystem NeighborhoodSystem::hausdorff(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hausdorff: eps must be positive");
  NeighborhoodSystem s;
  s.kind_ = SystemKind::hausdorff;
  s.eps_ = eps;
  return s;
}

NeighborhoodSystem NeighborhoodSystem::cover(std::vector<std::vector<int>> sets) {
  NeighborhoodSystem s;
  s.kind_ = SystemKind::cover;
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  s.sets_ = std::move(sets);
  return s;
}

std::string NeighborhoodSystem::name() const {
  std::ostringstream os;
  switch (kind_) {
    case SystemKind::full: return "full";
    case SystemKind::rips: os << (inclusive_ ? "rips<=(" : "rips(") << eps_ << ")"; return os.str();
    case SystemKind::hausdorff: os << "hausdorff(" << eps_ << ")"; return os.str();
    case SystemKind::cover: os << "cover(" << sets_.size() << " sets)"; return os.str();
  }
  return "?";
}

namespace {

bool has_repeat(std::span<const int> t) {
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b)
      if (t[a] == t[b]) return true;
  return false;
}

bool set_contains_all(const std::vector<int>& set, std::span<const int> t) {
  for (int v : t)
    if (!std::binary_search(set.begin(), set.end(), v)) return false;
  return true;
}

}  // namespace

bool NeighborhoodSystem::admits(const MetricMeasureSpace& space, std::span<const int> t) const {
  const int n = space.size();
  for (int v : t)
    if (v < 0 || v >= n) return false;
  if (has_repeat(t)) return false;
  switch (kind_) {
    case SystemKind::full: return true;
    case SystemKind::rips:
      for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a + 1; b < t.size(); ++b) {
          double d = space.distance(t[a], t[b]);
          if (inclusive_ ? d > eps_ : d >= eps_) return false;
        }
      return true;
    case SystemKind::hausdorff:
      for (int y = 0; y < n; ++y) {
        bool ok = true;
        for (int v : t)
          if (space.distance(v, y) > eps_) {
            ok = false;
            break;
          }
        if (ok) return true;
      }
      return false;
    case SystemKind::cover:
      for (const auto& set : sets_)
        if (set_contains_all(set, t)) return true;
      return false;
  }
  return false;
}

bool NeighborhoodSystem::admits_extension(const MetricMeasureSpace& space, std::span<const int> t,
                                          int extra) const {
  if (kind_ == SystemKind::full) {
    for (int v : t)
      if (v == extra) return false;
    return extra >= 0 && extra < space.size();
  }
  if (kind_ == SystemKind::rips) {
    for (int v : t) {
      if (v == extra) return false;
      double d = space.distance(v, extra);
      if (inclusive_ ? d > eps_ : d >= eps_) return false;
    }
    return true;
  }
  std::vector<int> u(t.begin(), t.end());
  u.push_back(extra);
  return admits(space, u);
}

TupleSet TupleSet::from_tuples(int degree, std::vector<std::vector<int>> tuples) {
  if (degree < 0) throw std::invalid_argument("TupleSet: negative degree");
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != degree + 1) throw std::invalid_argument("TupleSet: wrong tuple width");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (t[k - 1] >= t[k]) throw std::invalid_argument("TupleSet: tuples must be strictly increasing");
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  TupleSet s(degree);
  for (const auto& t : tuples) s.flat_.insert(s.flat_.end(), t.begin(), t.end());
  return s;
}

TupleSet TupleSet::from_flat(int degree, std::vector<int> flat) {
  TupleSet s(degree);
  const std::size_t w = static_cast<std::size_t>(degree + 1);
  if (flat.size() % w != 0) throw std::invalid_argument("TupleSet: flat size not a multiple of width");
  s.flat_ = std::move(flat);
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto t = s[i];
    for (std::size_t k = 1; k < w; ++k)
      if (t[k - 1] >= t[k]) throw std::invalid_argument("TupleSet: tuples must be strictly increasing");
    if (i > 0 && !std::lexicographical_compare(s[i - 1].begin(), s[i - 1].end(), t.begin(), t.end()))
      throw std::invalid_argument("TupleSet: tuples not in lexicographic order");
  }
  return s;
}

long TupleSet::index_of(std::span<const int> sorted) const {
  if (static_cast<int>(sorted.size()) != width()) return -1;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto t = (*this)[mid];
    if (std::lexicographical_compare(t.begin(), t.end(), sorted.begin(), sorted.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(sorted.begin(), sorted.end(), (*this)[lo].begin())) return static_cast<long>(lo);
  return -1;
}

std::uint64_t TupleSet::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint32_t v) {
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint32_t>(degree_));
  for (int v : flat_) mix(static_cast<std::uint32_t>(v));
  return h;
}

Json TupleSet::to_json() const {
  Json tuples = Json::array();
  for (std::size_t i = 0; i < size(); ++i) tuples.push_back(std::vector<int>((*this)[i].begin(), (*this)[i].end()));
  return Json{{"degree", degree_}, {"tuples", tuples}};
}

TupleSet TupleSet::from_json(const Json& j) {
  return from_tuples(j.at("degree").get<int>(), j.at("tuples").get<std::vector<std::vector<int>>>());
}

std::pair<std::vector<int>, int> sort_with_sign(std::span<const int> tuple) {
  std::vector<int> v(tuple.begin(), tuple.end());
  int sign = 1;
  // insertion sort, counting transpositions
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] == v[i]) return {std::move(v), 0};
  return {std::move(v), sign};
}

namespace {

TupleSet extend(const MetricMeasureSpace& space, const NeighborhoodSystem& system, const TupleSet& lower) {
  const int n = space.size();
  const int p = lower.degree() + 1;
  const std::size_t m = lower.size();
  const std::size_t chunks = default_chunks(m);
  std::vector<std::vector<int>> parts(chunks);
  parallel_chunks(m, chunks, [&](std::size_t b, std::size_t e, std::size_t c) {
    auto& out = parts[c];
    std::vector<int> t(static_cast<std::size_t>(p + 1));
    for (std::size_t i = b; i < e; ++i) {
      auto s = lower[i];
      std::copy(s.begin(), s.end(), t.begin());
      for (int x = s.back() + 1; x < n; ++x) {
        if (system.admits_extension(space, s, x)) {
          t.back() = x;
          out.insert(out.end(), t.begin(), t.end());
        }
      }
    }
  });
  std::vector<int> flat;
  for (auto& part : parts) flat.insert(flat.end(), part.begin(), part.end());
  // extensions of a lexicographically sorted list by increasing last entries stay sorted
  TupleSet out(p);
  out = TupleSet::from_flat(p, std::move(flat));
  return out;
}

}  // namespace

std::vector<TupleSet> enumerate_tuple_sets(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                                           int p_max) {
  if (p_max < 0) throw std::invalid_argument("enumerate_tuple_sets: negative degree");
  std::vector<TupleSet> out;
  std::vector<int> pts;
  for (int i = 0; i < space.size(); ++i) {
    int t[1] = {i};
    if (system.admits(space, t)) pts.push_back(i);
  }
  out.push_back(TupleSet::from_flat(0, std::move(pts)));
  for (int p = 1; p <= p_max; ++p) out.push_back(extend(space, system, out.back()));
  return out;
}

TupleSet enumerate_tuples(const MetricMeasureSpace& space, const NeighborhoodSystem& system, int p) {
  return std::move(enumerate_tuple_sets(space, system, p).back());
}

TupleSet restrict_tuples(const TupleSet& parent, const std::vector<char>& members) {
  std::vector<int> flat;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    auto t = parent[i];
    bool in = std::all_of(t.begin(), t.end(), [&](int v) { return members[v] != 0; });
    if (in) flat.insert(flat.end(), t.begin(), t.end());
  }
  return TupleSet::from_flat(parent.degree(), std::move(flat));
}

FaceClosureResult check_face_closure(std::span<const TupleSet> sets) {
  FaceClosureResult r;
  for (std::size_t p = 1; p < sets.size(); ++p) {
    if (sets[p].degree() != static_cast<int>(p) || sets[p - 1].degree() != static_cast<int>(p - 1))
      throw std::invalid_argument("check_face_closure: degrees must be contiguous from 0");
    std::vector<int> face(p);
    for (std::size_t i = 0; i < sets[p].size(); ++i) {
      auto t = sets[p][i];
      for (std::size_t k = 0; k <= p; ++k) {
        std::size_t f = 0;
        for (std::size_t m = 0; m <= p; ++m)
          if (m != k) face[f++] = t[m];
        if (!sets[p - 1].contains(face)) {
          r.pass = false;
          r.degree = static_cast<int>(p);
          r.tuple.assign(t.begin(), t.end());
          r.face = face;
          return r;
        }
      }
    }
  }
  return r;
}

DominanceResult system_dominates(const NeighborhoodSystem& a, const NeighborhoodSystem& b,
                                 const MetricMeasureSpace& space, int p_max) {
  DominanceResult r;
  auto sets = enumerate_tuple_sets(space, a, p_max);
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!b.admits(space, s[i])) {
        r.pass = false;
        r.degree = s.degree();
        r.witness.assign(s[i].begin(), s[i].end());
        return r;
      }
    }
  }
  return r;
}

}  // namespace nlh
