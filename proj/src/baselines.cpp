#include "aistrack/baselines.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "aistrack/csv.hpp"
#include "aistrack/error.hpp"

namespace aistrack {

namespace {

bool zhao_speed_fires(const AisMessage& a, const AisMessage& b, const ZhaoParams& p) {
  return !(b.recv_time > a.recv_time) || est_sog(a, b) > p.max_est_sog;
}

}  // namespace

ZhaoResult split_zhao(const MessageStream& stream, std::optional<std::span<const double>> send_times,
                      const ZhaoParams& params) {
  const auto& ms = stream.messages;
  if (send_times && send_times->size() != ms.size())
    throw Error(ErrorCode::InvalidArgument, "send_times must match the stream length");
  ZhaoResult r;
  r.send_time_checked = send_times.has_value();

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (send_times && std::abs(ms[i].recv_time - (*send_times)[i]) > params.max_clock_skew)
      r.dropped.push_back(i);
    else
      kept.push_back(i);
  }

  std::vector<Trajectory> parts;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    if (k > 0) {
      const AisMessage& a = ms[kept[k - 1]];
      const AisMessage& b = ms[i];
      if (b.recv_time - a.recv_time > params.max_gap || zhao_speed_fires(a, b, params)) {
        r.split_points.push_back(kept[k - 1]);
        parts.emplace_back();
      }
    }
    if (parts.empty()) parts.emplace_back();
    parts.back().mmsi = stream.mmsi;
    parts.back().messages.push_back(ms[i]);
    parts.back().source.push_back(i);
  }

  bool merged = true;
  while (merged && parts.size() > 1) {
    merged = false;
    std::vector<Trajectory> out;
    out.push_back(std::move(parts.front()));
    for (std::size_t j = 1; j < parts.size(); ++j) {
      Trajectory& cur = out.back();
      if (!zhao_speed_fires(cur.messages.back(), parts[j].messages.front(), params)) {
        cur.messages.insert(cur.messages.end(), parts[j].messages.begin(), parts[j].messages.end());
        cur.source.insert(cur.source.end(), parts[j].source.begin(), parts[j].source.end());
        merged = true;
      } else {
        out.push_back(std::move(parts[j]));
      }
    }
    parts = std::move(out);
  }
  r.trajectories = std::move(parts);
  return r;
}

GuoResult filter_guo(const MessageStream& stream, double c_lim, double v_lim) {
  if (!(c_lim > 0.0) || !(v_lim > 0.0)) throw Error(ErrorCode::InvalidArgument, "c_lim and v_lim must be positive");
  GuoResult r;
  r.kept.mmsi = stream.mmsi;
  const auto& ms = stream.messages;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    bool drop = false;
    if (!r.kept_indices.empty()) {
      const AisMessage& last = ms[r.kept_indices.back()];
      const AisMessage& m = ms[i];
      if (!(m.recv_time > last.recv_time)) {
        drop = true;
      } else {
        const bool turn = last.cog_available() && m.cog_available() && std::abs(turning_rate(last, m)) > c_lim;
        drop = turn || est_sog(last, m) > v_lim;
      }
    }
    if (drop) {
      r.dropped.push_back(i);
    } else {
      r.kept_indices.push_back(i);
      r.kept.messages.push_back(ms[i]);
    }
  }
  return r;
}

namespace {

void take_max(MaxValue& mv, double v, Witness w) {
  if (!std::isfinite(v)) return;
  if (!mv.witness || v > mv.value) {
    mv.value = v;
    mv.witness = w;
  }
}

}  // namespace

void ComparisonRow::absorb(const ComparisonRow& o) {
  discarded += o.discarded;
  if (split_points || o.split_points) split_points = split_points.value_or(0) + o.split_points.value_or(0);
  for (auto [mine, theirs] : {std::pair{&max_turning_rate, &o.max_turning_rate},
                              std::pair{&max_speed_change, &o.max_speed_change},
                              std::pair{&max_distance, &o.max_distance}})
    if (theirs->witness) take_max(*mine, theirs->value, *theirs->witness);
}

ComparisonReport compare(const std::map<std::string, MethodResult>& methods, const MessageStream& raw) {
  ComparisonReport report;
  for (const auto& [name, result] : methods) {
    ComparisonRow row;
    row.method = name;
    row.split_points = result.split_points;
    std::size_t emitted = 0;
    for (const Trajectory& t : result.trajectories) {
      emitted += t.size();
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const PairMetrics pm = pair_metrics(t.messages[i], t.messages[i + 1]);
        const Witness w{raw.mmsi, t.source.empty() ? i : t.source[i]};
        take_max(row.max_distance, pm.dist, w);
        if (pm.forced_split()) continue;
        take_max(row.max_turning_rate, std::abs(pm.rot), w);
        take_max(row.max_speed_change, std::abs(pm.dsog) / pm.dt, w);
      }
    }
    row.discarded = raw.messages.size() >= emitted ? raw.messages.size() - emitted : 0;
    report.push_back(std::move(row));
  }
  return report;
}

std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "method,discarded_messages,split_points,max_turning_rate_deg_s,max_turning_rate_mmsi,"
         "max_turning_rate_index,max_speed_change_kn_s,max_speed_change_mmsi,max_speed_change_index,"
         "max_distance_nm,max_distance_mmsi,max_distance_index\n";
  auto cell = [&](const MaxValue& v) {
    if (!v.witness) return std::string(",,");
    return csv::format_double(v.value) + "," + std::to_string(v.witness->mmsi) + "," +
           std::to_string(v.witness->index);
  };
  for (const auto& r : report)
    out << csv::quote(r.method) << ',' << r.discarded << ','
        << (r.split_points ? std::to_string(*r.split_points) : std::string("-")) << ',' << cell(r.max_turning_rate)
        << ',' << cell(r.max_speed_change) << ',' << cell(r.max_distance) << '\n';
  return out.str();
}

}  // namespace aistrack
