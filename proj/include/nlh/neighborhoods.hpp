#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlh/space.hpp"

namespace nlh {

using Json = nlohmann::ordered_json;

enum class SystemKind { full, rips, hausdorff, cover };

/**
 * Rule deciding which (p+1)-tuples of distinct points are admissible.
 * rips: max pairwise distance < eps (<= when inclusive).
 * hausdorff: some sample point y has max_i dist(x_i, y) <= eps.
 * cover: all entries lie in one of the given index sets.
 */
class NeighborhoodSystem {
 public:
  static NeighborhoodSystem full();
  static NeighborhoodSystem rips(double eps, bool inclusive = false);
  static NeighborhoodSystem hausdorff(double eps);
  static NeighborhoodSystem cover(std::vector<std::vector<int>> sets);

  SystemKind kind() const { return kind_; }
  double eps() const { return eps_; }
  bool inclusive() const { return inclusive_; }
  const std::vector<std::vector<int>>& cover_sets() const { return sets_; }

  /// Entries may come in any order; a repeated index is never admissible.
  bool admits(const MetricMeasureSpace& space, std::span<const int> tuple) const;
  /// Whether tuple + {extra} is admissible, given that tuple already is.
  bool admits_extension(const MetricMeasureSpace& space, std::span<const int> tuple, int extra) const;

  std::string name() const;

 private:
  SystemKind kind_ = SystemKind::full;
  double eps_ = 0.0;
  bool inclusive_ = false;
  std::vector<std::vector<int>> sets_;  // sorted
};

/**
 * Strictly increasing index tuples of one degree, lexicographically sorted,
 * stored flat with stride degree+1.
 */
class TupleSet {
 public:
  explicit TupleSet(int degree = 0) : degree_(degree) {}
  /// Validates that tuples are strictly increasing; sorts and deduplicates the list.
  static TupleSet from_tuples(int degree, std::vector<std::vector<int>> tuples);
  /// Takes an already sorted flat list (checked).
  static TupleSet from_flat(int degree, std::vector<int> flat);

  int degree() const { return degree_; }
  int width() const { return degree_ + 1; }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(width()); }
  bool empty() const { return flat_.empty(); }
  std::span<const int> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(width()), static_cast<std::size_t>(width())};
  }
  const std::vector<int>& flat() const { return flat_; }

  /// Position of a sorted tuple, or -1.
  long index_of(std::span<const int> sorted) const;
  bool contains(std::span<const int> sorted) const { return index_of(sorted) >= 0; }

  /// FNV-1a 64 over degree and entries.
  std::uint64_t hash() const;
  Json to_json() const;
  static TupleSet from_json(const Json& j);

  bool operator==(const TupleSet& o) const { return degree_ == o.degree_ && flat_ == o.flat_; }

 private:
  int degree_;
  std::vector<int> flat_;
};

/// Sorted copy of `tuple` and the sign of the sorting permutation (0 on repeats).
std::pair<std::vector<int>, int> sort_with_sign(std::span<const int> tuple);

TupleSet enumerate_tuples(const MetricMeasureSpace& space, const NeighborhoodSystem& system, int p);
/// Degrees 0..p_max, built incrementally.
std::vector<TupleSet> enumerate_tuple_sets(const MetricMeasureSpace& space, const NeighborhoodSystem& system,
                                           int p_max);
/// Tuples of `parent` (a lower-degree-closed family) whose entries all lie in `members`.
TupleSet restrict_tuples(const TupleSet& parent, const std::vector<char>& members);

struct FaceClosureResult {
  bool pass = true;
  int degree = -1;
  std::vector<int> tuple;
  std::vector<int> face;
};
/// tuple_sets[k] must have degree k.
FaceClosureResult check_face_closure(std::span<const TupleSet> tuple_sets);

struct DominanceResult {
  bool pass = true;
  int degree = -1;
  std::vector<int> witness;  ///< admissible under a, not under b
};
DominanceResult system_dominates(const NeighborhoodSystem& a, const NeighborhoodSystem& b,
                                 const MetricMeasureSpace& space, int p_max);

}  // namespace nlh
