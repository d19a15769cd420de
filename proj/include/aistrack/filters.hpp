#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "aistrack/geo.hpp"
#include "json.hpp"

namespace aistrack {

/// Per-reason drop counters. A message is charged to the first reason it
/// meets, in declaration order.
struct DropStats {
  std::size_t position_unavailable = 0;
  std::size_t out_of_bounds = 0;
  std::size_t sog_unavailable = 0;
  std::size_t sog_below = 0;
  std::size_t sog_above = 0;

  std::size_t total() const noexcept {
    return position_unavailable + out_of_bounds + sog_unavailable + sog_below + sog_above;
  }
  DropStats& operator+=(const DropStats& o) noexcept;
  friend bool operator==(const DropStats&, const DropStats&) = default;
};

nlohmann::json to_json(const DropStats& s);

struct FilterResult {
  std::vector<AisMessage> kept;
  DropStats dropped;
};

/// Keeps messages with an available position inside `bb` and an available
/// SOG in the closed interval [sog_min, sog_max]. COG is not inspected.
FilterResult filter_messages(std::span<const AisMessage> messages, const BoundingBox& bb, double sog_min = 1.0,
                             double sog_max = 30.0);

using MessagePredicate = std::function<bool(const AisMessage&)>;

/// Order-preserving subsequence of messages satisfying `keep`.
std::vector<AisMessage> apply_preprocessor(std::span<const AisMessage> messages, const MessagePredicate& keep);

}  // namespace aistrack
