#pragma once

// Full-sort quantiles with integer ranks.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

/// Rank ceil(i * n / 200) of grid point i / 200, i in 1..199.
inline std::uint64_t grid_rank(std::uint64_t i, std::uint64_t n) { return std::max<std::uint64_t>(1, (i * n + 199) / 200); }

inline double grid_quantile(const std::vector<double>& sorted_values, std::uint64_t i) {
  return sorted_values[grid_rank(i, sorted_values.size()) - 1];
}

/// Distance, as a fraction of n, between `target_rank` and the rank interval
/// that `v` occupies in `sorted`.
inline double rank_error(const std::vector<double>& sorted, double v, std::uint64_t target_rank) {
  const auto lo = static_cast<std::uint64_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1;
  const auto hi = static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
  const double n = static_cast<double>(sorted.size());
  if (target_rank < lo) return static_cast<double>(lo - target_rank) / n;
  if (target_rank > hi) return static_cast<double>(target_rank - hi) / n;
  return 0.0;
}

}  // namespace oracle
