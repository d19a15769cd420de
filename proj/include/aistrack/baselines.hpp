#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aistrack/splitter.hpp"

namespace aistrack {

struct ZhaoParams {
  double max_est_sog = 15.0;     // kn
  double max_gap = 600.0;        // s
  double max_clock_skew = 5.0;   // s, |recv - send|
};

struct ZhaoResult {
  std::vector<Trajectory> trajectories;  // after rejoin, singletons kept
  std::vector<std::size_t> split_points;  // stream index of the first message of each split pair
  std::vector<std::size_t> dropped;       // failed the send-time check
  bool send_time_checked = false;
};

/// Split on positional speed or time gap, then rejoin boundary pairs on the
/// speed condition alone. Without `send_times` step one is skipped.
ZhaoResult split_zhao(const MessageStream& stream, std::optional<std::span<const double>> send_times = std::nullopt,
                      const ZhaoParams& params = {});

struct GuoResult {
  MessageStream kept;
  std::vector<std::size_t> kept_indices;
  std::vector<std::size_t> dropped;
};

/// Forward scan against the last kept message: a message is dropped when
/// |turning rate| > c_lim (deg/s) or positional speed > v_lim (kn), or when
/// it shares the last kept message's timestamp.
GuoResult filter_guo(const MessageStream& stream, double c_lim, double v_lim);

struct MethodResult {
  std::vector<Trajectory> trajectories;
  std::optional<std::size_t> split_points;  // nullopt for pure exclusion methods
};

struct Witness {
  Mmsi mmsi = 0;
  std::size_t index = 0;  // first message of the pair, in the raw stream
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct MaxValue {
  double value = 0.0;
  std::optional<Witness> witness;
  friend bool operator==(const MaxValue&, const MaxValue&) = default;
};

struct ComparisonRow {
  std::string method;
  std::size_t discarded = 0;
  std::optional<std::size_t> split_points;
  MaxValue max_turning_rate;  // deg/s, absolute
  MaxValue max_speed_change;  // kn/s, |dsog| / dt
  MaxValue max_distance;      // nm

  /// Adds another stream's row of the same method.
  void absorb(const ComparisonRow& o);
  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

using ComparisonReport = std::vector<ComparisonRow>;

/// One row per method, in map order, over consecutive pairs inside emitted
/// trajectories.
ComparisonReport compare(const std::map<std::string, MethodResult>& methods, const MessageStream& raw);

std::string comparison_csv(const ComparisonReport& report);

}  // namespace aistrack
