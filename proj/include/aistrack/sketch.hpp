#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace aistrack {

/// Deterministic mergeable quantile sketch (compactor hierarchy with
/// alternating offsets). Exact while fewer than `k` values were added.
/// Rank error is at most H/k of the count, H being the number of levels
/// above the first; k = 8192 keeps it under 0.1% up to ~10^9 values.
class QuantileSketch {
 public:
  static constexpr std::size_t kDefaultK = 8192;

  explicit QuantileSketch(std::size_t k = kDefaultK);

  void add(double v);
  /// Order of merges matters for the exact contents, not for the bound.
  void merge(const QuantileSketch& other);

  std::uint64_t count() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  bool exact() const noexcept { return levels_.size() <= 1; }
  std::size_t k() const noexcept { return k_; }
  std::size_t retained() const noexcept;

  /// Inverse ECDF: the smallest retained value whose cumulative weight
  /// reaches ceil(p * n). Throws EmptyBin when empty.
  double quantile(double p) const;
  /// Same as quantile() for every p, sorting the retained items once.
  std::vector<double> quantiles(std::span<const double> ps) const;

  nlohmann::json to_json() const;
  static QuantileSketch from_json(const nlohmann::json& j);

  friend bool operator==(const QuantileSketch&, const QuantileSketch&) = default;

 private:
  void compact(std::size_t level);
  void settle();

  std::size_t k_;
  std::uint64_t n_ = 0;
  std::vector<std::vector<double>> levels_;
  std::vector<std::uint8_t> parity_;
};

/// ceil(p * n) clamped to [1, n], robust to p carrying a rounding error.
std::uint64_t ecdf_rank(double p, std::uint64_t n) noexcept;

}  // namespace aistrack
