#include "aistrack/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aistrack/error.hpp"
#include "aistrack/geo.hpp"

namespace aistrack {

double Trajectory::length_nm() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < messages.size(); ++i) m += haversine(messages[i].position(), messages[i + 1].position());
  return m / kMetersPerNauticalMile;
}

unsigned split_reasons(const PairMetrics& pm, const SplitThresholds& th) noexcept {
  if (pm.forced_split()) return kSplitForced;
  unsigned r = kSplitNone;
  // Comparisons are written so that NaN never fires.
  if (pm.dsog > th.s) r |= kSplitSpeedChange;
  if (pm.rot < th.r_lo || pm.rot > th.r_hi) r |= kSplitTurnRate;
  if (pm.dt > th.t) r |= kSplitTimeGap;
  if (pm.dist > th.d) r |= kSplitDistance;
  if (pm.speed_gap < th.b_lo || pm.speed_gap > th.b_hi) r |= kSplitSpeedGap;
  return r;
}

unsigned split_reasons(const AisMessage& a, const AisMessage& b, const SplitThresholds& th) {
  return split_reasons(pair_metrics(a, b, th.cog_mode), th);
}

std::vector<std::size_t> find_split_points(std::span<const AisMessage> stream, const SplitThresholds& th) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < stream.size(); ++i)
    if (split_reasons(stream[i], stream[i + 1], th) != kSplitNone) out.push_back(i);
  return out;
}

SplitOutcome cut(const MessageStream& stream, std::vector<std::size_t> split_points) {
  SplitOutcome out;
  std::sort(split_points.begin(), split_points.end());
  split_points.erase(std::unique(split_points.begin(), split_points.end()), split_points.end());
  out.split_points = split_points;
  const auto& ms = stream.messages;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    if (end - begin == 1) {
      out.dropped.push_back(begin);
    } else if (end > begin) {
      Trajectory t;
      t.mmsi = stream.mmsi;
      t.messages.assign(ms.begin() + static_cast<std::ptrdiff_t>(begin), ms.begin() + static_cast<std::ptrdiff_t>(end));
      t.source.resize(end - begin);
      std::iota(t.source.begin(), t.source.end(), begin);
      out.trajectories.push_back(std::move(t));
    }
    begin = end;
  };
  for (std::size_t i : split_points)
    if (i + 1 < ms.size()) emit(i + 1);
  emit(ms.size());
  return out;
}

SplitOutcome split(const MessageStream& stream, const SplitThresholds& th) {
  return cut(stream, find_split_points(stream.messages, th));
}

std::vector<Trajectory> rejoin(std::vector<Trajectory> trajs, const SplitThresholds& th) {
  bool merged = true;
  while (merged && trajs.size() > 1) {
    merged = false;
    std::vector<Trajectory> out;
    out.push_back(std::move(trajs.front()));
    for (std::size_t j = 1; j < trajs.size(); ++j) {
      Trajectory& cur = out.back();
      Trajectory& next = trajs[j];
      if (!cur.messages.empty() && !next.messages.empty() &&
          split_reasons(cur.messages.back(), next.messages.front(), th) == kSplitNone) {
        cur.messages.insert(cur.messages.end(), std::make_move_iterator(next.messages.begin()),
                            std::make_move_iterator(next.messages.end()));
        cur.source.insert(cur.source.end(), next.source.begin(), next.source.end());
        merged = true;
      } else {
        out.push_back(std::move(next));
      }
    }
    trajs = std::move(out);
  }
  return trajs;
}

ExtractStats& ExtractStats::operator+=(const ExtractStats& o) noexcept {
  messages += o.messages;
  split_points += o.split_points;
  singletons_dropped += o.singletons_dropped;
  rejoined += o.rejoined;
  trajectories += o.trajectories;
  total_length_nm += o.total_length_nm;
  return *this;
}

namespace {

struct ShipOutcome {
  TargetShip ship;
  ExtractStats stats;
};

ShipOutcome extract_one(const MessageStream& stream, const std::map<Mmsi, VesselStatic>& statics,
                        const QuantileTable* table, double alpha, bool skip_split) {
  ShipOutcome o;
  o.ship.mmsi = stream.mmsi;
  o.ship.info.mmsi = stream.mmsi;
  if (const auto it = statics.find(stream.mmsi); it != statics.end()) o.ship.info = it->second;
  o.stats.messages = stream.messages.size();
  if (skip_split) {
    if (!stream.messages.empty()) {
      Trajectory t{stream.mmsi, stream.messages, std::vector<std::size_t>(stream.messages.size())};
      std::iota(t.source.begin(), t.source.end(), std::size_t{0});
      o.ship.trajectories.push_back(std::move(t));
    }
  } else {
    const SplitThresholds th = thresholds(*table, o.ship.info.ship_length, alpha);
    SplitOutcome s = split(stream, th);
    o.stats.split_points = s.split_points.size();
    o.stats.singletons_dropped = s.dropped.size();
    const std::size_t before = s.trajectories.size();
    o.ship.trajectories = rejoin(std::move(s.trajectories), th);
    o.stats.rejoined = before - o.ship.trajectories.size();
  }
  o.stats.trajectories = o.ship.trajectories.size();
  for (const auto& t : o.ship.trajectories) o.stats.total_length_nm += t.length_nm();
  return o;
}

void check_extract_args(const QuantileTable* table, double alpha, bool skip_split) {
  if (skip_split) return;
  if (!table) throw Error(ErrorCode::InvalidArgument, "a quantile table is required unless splitting is skipped");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
}

ExtractResult gather(std::vector<ShipOutcome>& outcomes) {
  ExtractResult r;
  for (auto& o : outcomes) {
    r.stats += o.stats;
    const Mmsi id = o.ship.mmsi;
    auto [it, inserted] = r.ships.emplace(id, std::move(o.ship));
    if (!inserted) {
      // Same MMSI in several streams: append in stream order.
      auto& dst = it->second.trajectories;
      for (auto& t : o.ship.trajectories) dst.push_back(std::move(t));
    }
  }
  return r;
}

}  // namespace

ExtractResult extract_all(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                          const QuantileTable* table, double alpha, bool skip_split) {
  check_extract_args(table, alpha, skip_split);
  std::vector<ShipOutcome> outcomes(streams.size());
  std::vector<std::string> errors(streams.size());
  std::vector<ErrorCode> codes(streams.size(), ErrorCode::InvalidArgument);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(streams.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      outcomes[k] = extract_one(streams[k], statics, table, alpha, skip_split);
    } catch (const Error& e) {
      codes[k] = e.code();
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty()) throw Error(codes[k], errors[k]);
  return gather(outcomes);
}

namespace serial {

ExtractResult extract_all(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                          const QuantileTable* table, double alpha, bool skip_split) {
  check_extract_args(table, alpha, skip_split);
  std::vector<ShipOutcome> outcomes;
  outcomes.reserve(streams.size());
  for (const auto& s : streams) outcomes.push_back(extract_one(s, statics, table, alpha, skip_split));
  return gather(outcomes);
}

}  // namespace serial

}  // namespace aistrack
