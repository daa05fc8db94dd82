#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

namespace nlh {

/// Integer matrix as sorted column lists (row, value).
struct IntColumns {
  long rows = 0;
  std::vector<std::vector<std::pair<long, long>>> columns;
};

IntColumns to_columns(const Eigen::SparseMatrix<int, Eigen::RowMajor>& m);
IntColumns to_columns(const Eigen::SparseMatrix<int>& m);

inline constexpr std::uint32_t kPrimaryPrime = 2147483647u;    // 2^31 - 1
inline constexpr std::uint32_t kSecondaryPrime = 2147483629u;  // largest prime below it

/// Rank over GF(prime) by sparse column reduction.
std::size_t rank_mod_prime(const IntColumns& m, std::uint32_t prime);
/// Rank over the rationals (arbitrary precision).
std::size_t rank_rational(const IntColumns& m);

}  // namespace nlh
