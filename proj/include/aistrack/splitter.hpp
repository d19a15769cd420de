#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aistrack/ingest.hpp"
#include "aistrack/metrics.hpp"
#include "aistrack/quantiles.hpp"

namespace aistrack {

/// A time-ordered run of one vessel's messages.
struct Trajectory {
  Mmsi mmsi = 0;
  std::vector<AisMessage> messages;
  std::vector<std::size_t> source;  // index of each message in the parent stream

  std::size_t size() const noexcept { return messages.size(); }
  /// Half-open index range [first, last + 1) in the parent stream.
  std::pair<std::size_t, std::size_t> source_span() const noexcept {
    return source.empty() ? std::pair<std::size_t, std::size_t>{0, 0}
                          : std::pair<std::size_t, std::size_t>{source.front(), source.back() + 1};
  }
  /// Sum of great-circle legs, nautical miles.
  double length_nm() const noexcept;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct TargetShip {
  Mmsi mmsi = 0;
  VesselStatic info;
  std::vector<Trajectory> trajectories;

  friend bool operator==(const TargetShip&, const TargetShip&) = default;
};

/// Which split conditions a pair violates; bitwise-or of SplitReason.
enum SplitReason : unsigned {
  kSplitNone = 0,
  kSplitSpeedChange = 1U << 0,  // dsog > s
  kSplitTurnRate = 1U << 1,     // rot outside r
  kSplitTimeGap = 1U << 2,      // dt > t
  kSplitDistance = 1U << 3,     // dist > d
  kSplitSpeedGap = 1U << 4,     // speed_gap outside b
  kSplitForced = 1U << 5,       // dt == 0
};

/// Conditions that cannot be evaluated (NaN inputs) do not fire.
unsigned split_reasons(const PairMetrics& pm, const SplitThresholds& th) noexcept;
unsigned split_reasons(const AisMessage& a, const AisMessage& b, const SplitThresholds& th);

/// Indices i such that the stream is cut between i and i + 1.
std::vector<std::size_t> find_split_points(std::span<const AisMessage> stream, const SplitThresholds& th);

struct SplitOutcome {
  std::vector<Trajectory> trajectories;
  std::vector<std::size_t> split_points;
  std::vector<std::size_t> dropped;  // stream indices of discarded singletons
};

SplitOutcome split(const MessageStream& stream, const SplitThresholds& th);

/// Cuts `stream` at `split_points`, dropping fragments of one message.
SplitOutcome cut(const MessageStream& stream, std::vector<std::size_t> split_points);

/// Merges neighbours whose boundary pair fires no condition, until no
/// merge applies.
std::vector<Trajectory> rejoin(std::vector<Trajectory> trajs, const SplitThresholds& th);

struct ExtractStats {
  std::size_t messages = 0;
  std::size_t split_points = 0;
  std::size_t singletons_dropped = 0;
  std::size_t rejoined = 0;  // merges performed
  std::size_t trajectories = 0;
  double total_length_nm = 0.0;

  ExtractStats& operator+=(const ExtractStats& o) noexcept;
  double average_length_nm() const noexcept {
    return trajectories ? total_length_nm / static_cast<double>(trajectories) : 0.0;
  }
  friend bool operator==(const ExtractStats&, const ExtractStats&) = default;
};

struct ExtractResult {
  std::map<Mmsi, TargetShip> ships;
  ExtractStats stats;
};

/// Per vessel: thresholds, split, rejoin. With `skip_split` every vessel
/// keeps its whole stream as one trajectory and `table` may be null.
ExtractResult extract_all(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                          const QuantileTable* table, double alpha, bool skip_split = false);

namespace serial {
ExtractResult extract_all(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                          const QuantileTable* table, double alpha, bool skip_split = false);
}

}  // namespace aistrack
