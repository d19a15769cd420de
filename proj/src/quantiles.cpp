#include "aistrack/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "aistrack/error.hpp"

namespace aistrack {

namespace {

constexpr std::size_t kShardStreams = 32;
constexpr std::size_t idx(Metric m) noexcept { return static_cast<std::size_t>(m); }

std::optional<std::size_t> bin_of(Mmsi mmsi, const std::map<Mmsi, VesselStatic>& statics, const LengthBins& bins) {
  const auto it = statics.find(mmsi);
  if (it == statics.end() || !it->second.ship_length) return std::nullopt;
  return bins.index_of(*it->second.ship_length);
}

bool in_window(const AisMessage& m, const TrainingWindow& w) noexcept {
  return m.recv_time >= w.start && m.recv_time <= w.end;
}

// Visits every in-window consecutive pair of `stream`.
template <class F>
void for_each_pair(const MessageStream& stream, const TrainingWindow& w, F&& f) {
  const auto& ms = stream.messages;
  for (std::size_t i = 0; i + 1 < ms.size(); ++i)
    if (in_window(ms[i], w) && in_window(ms[i + 1], w)) f(ms[i], ms[i + 1]);
}

void accumulate_stream(const MessageStream& stream, const std::map<Mmsi, VesselStatic>& statics,
                       const CalibrationOptions& opt, double gate, const TrainingWindow& w, CalibrationShard& out) {
  const auto bin = bin_of(stream.mmsi, statics, opt.bins);
  const std::size_t pooled = opt.bins.size();
  for (const auto& m : stream.messages) {
    if (!in_window(m, w)) continue;
    ++out.messages_per_bin[pooled];
    if (bin) ++out.messages_per_bin[*bin];
  }
  auto put = [&](Metric m, double v) {
    if (!std::isfinite(v)) return;
    out.sketches[idx(m)][pooled].add(v);
    if (bin) out.sketches[idx(m)][*bin].add(v);
  };
  for_each_pair(stream, w, [&](const AisMessage& a, const AisMessage& b) {
    const PairMetrics pm = pair_metrics(a, b, opt.cog_mode);
    out.sketches[idx(Metric::Dt)][0].add(pm.dt);
    if (pm.forced_split() || pm.dt > gate) return;
    put(Metric::DsogAbs, std::abs(pm.dsog));
    put(Metric::Rot, pm.rot);
    put(Metric::Dist, pm.dist);
    put(Metric::SpeedGap, pm.speed_gap);
  });
}

void check_static_data(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                       const CalibrationOptions& opt) {
  if (opt.pooled_fallback || streams.empty()) return;
  for (const auto& s : streams)
    if (bin_of(s.mmsi, statics, opt.bins)) return;
  throw Error(ErrorCode::NoStaticData, "no vessel in the corpus has a known length");
}

QuantileSketch dt_sketch(const MessageStream& stream, const TrainingWindow& w, std::size_t k) {
  QuantileSketch s(k);
  for_each_pair(stream, w, [&](const AisMessage& a, const AisMessage& b) { s.add(b.recv_time - a.recv_time); });
  return s;
}

double gate_from(const QuantileSketch& dt, double gate_p) {
  if (dt.empty()) throw Error(ErrorCode::EmptyBin, "no message pairs inside the training window");
  return dt.quantile(gate_p);
}

void check_options(const CalibrationOptions& opt) {
  opt.bins.validate();
  if (!(opt.gate_p > 0.0 && opt.gate_p < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "gate_p must lie in (0, 1)");
  if (opt.window_seconds && !(*opt.window_seconds > 0.0))
    throw Error(ErrorCode::InvalidArgument, "training window must be positive");
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::DsogAbs: return "dsog_abs";
    case Metric::Rot: return "rot";
    case Metric::Dt: return "dt";
    case Metric::Dist: return "dist";
    case Metric::SpeedGap: return "speed_gap";
  }
  return "?";
}

std::size_t LengthBins::index_of(double length_m) const noexcept {
  const auto it = std::upper_bound(edges.begin(), edges.end(), length_m);
  return it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
}

std::string LengthBins::label(std::size_t bin) const {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  if (bin >= edges.size()) return "pooled";
  return "[" + num(edges[bin]) + "," + (bin + 1 < edges.size() ? num(edges[bin + 1]) : std::string("inf")) + ")";
}

void LengthBins::validate() const {
  if (edges.empty()) throw Error(ErrorCode::InvalidArgument, "length bins need at least one edge");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) throw Error(ErrorCode::InvalidArgument, "length bin edges must increase");
}

double grid_p(std::size_t i) noexcept { return static_cast<double>(i + 1) / 200.0; }

double QuantileFunction::operator()(double p) const {
  if (empty()) throw Error(ErrorCode::EmptyBin, "quantile of an empty bin");
  const double x = p * 200.0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 2e-7 && nearest >= 1.0 && nearest <= static_cast<double>(kGridSize))
    return grid[static_cast<std::size_t>(nearest) - 1];
  if (x > 1.0 && x < static_cast<double>(kGridSize)) {
    const auto lo = static_cast<std::size_t>(std::floor(x));
    const double frac = x - static_cast<double>(lo);
    return grid[lo - 1] + frac * (grid[lo] - grid[lo - 1]);
  }
  if (sketch) return sketch->quantile(p);
  return x <= 1.0 ? grid.front() : grid.back();
}

QuantileFunction QuantileFunction::from_sketch(QuantileSketch s) {
  QuantileFunction f;
  f.count = s.count();
  if (s.empty()) return f;
  std::array<double, kGridSize> ps;
  for (std::size_t i = 0; i < kGridSize; ++i) ps[i] = grid_p(i);
  f.grid = s.quantiles(ps);
  f.sketch = std::move(s);
  return f;
}

const QuantileFunction& QuantileTable::lookup(Metric m, std::optional<std::size_t> bin) const {
  const auto& fs = functions[idx(m)];
  if (fs.empty()) throw Error(ErrorCode::EmptyBin, std::string(to_string(m)) + " has no functions");
  const QuantileFunction& pooled = fs.back();
  if (m == Metric::Dt || !bin || fs.size() == 1) {
    if (pooled.empty()) throw Error(ErrorCode::EmptyBin, std::string(to_string(m)) + " pooled table is empty");
    return pooled;
  }
  const std::size_t nb = fs.size() - 1;
  const std::size_t b = std::min(*bin, nb - 1);
  for (std::size_t i = b; i < nb; ++i)
    if (!fs[i].empty()) return fs[i];
  for (std::size_t i = b; i-- > 0;)
    if (!fs[i].empty()) return fs[i];
  if (!pooled.empty()) return pooled;
  throw Error(ErrorCode::EmptyBin, std::string(to_string(m)) + " has no samples in any bin");
}

CalibrationShard::CalibrationShard(std::size_t bins, std::size_t k) : messages_per_bin(bins + 1, 0) {
  for (Metric m : kMetrics) sketches[idx(m)].assign(m == Metric::Dt ? 1 : bins + 1, QuantileSketch(k));
}

void CalibrationShard::merge(const CalibrationShard& other) {
  for (std::size_t m = 0; m < sketches.size(); ++m)
    for (std::size_t b = 0; b < sketches[m].size(); ++b) sketches[m][b].merge(other.sketches[m][b]);
  for (std::size_t b = 0; b < messages_per_bin.size(); ++b) messages_per_bin[b] += other.messages_per_bin[b];
}

TrainingWindow training_window(std::span<const MessageStream> streams, const CalibrationOptions& opt) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : streams)
    for (const auto& m : s.messages) {
      lo = std::min(lo, m.recv_time);
      hi = std::max(hi, m.recv_time);
    }
  if (lo > hi) return {};
  if (opt.window_seconds) lo = std::max(lo, hi - *opt.window_seconds);
  return {lo, hi};
}

double temporal_gate(std::span<const MessageStream> streams, const CalibrationOptions& opt,
                     const TrainingWindow& window) {
  const std::size_t shards = (streams.size() + kShardStreams - 1) / kShardStreams;
  std::vector<QuantileSketch> parts(shards, QuantileSketch(opt.sketch_k));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(shards); ++s) {
    const auto k = static_cast<std::size_t>(s);
    const std::size_t end = std::min(streams.size(), (k + 1) * kShardStreams);
    for (std::size_t i = k * kShardStreams; i < end; ++i) parts[k].merge(dt_sketch(streams[i], window, opt.sketch_k));
  }
  QuantileSketch all(opt.sketch_k);
  for (const auto& p : parts) all.merge(p);
  return gate_from(all, opt.gate_p);
}

CalibrationShard accumulate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                            const CalibrationOptions& opt, double gate, const TrainingWindow& window) {
  const std::size_t shards = (streams.size() + kShardStreams - 1) / kShardStreams;
  std::vector<CalibrationShard> parts(shards, CalibrationShard(opt.bins.size(), opt.sketch_k));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(shards); ++s) {
    const auto k = static_cast<std::size_t>(s);
    const std::size_t end = std::min(streams.size(), (k + 1) * kShardStreams);
    for (std::size_t i = k * kShardStreams; i < end; ++i)
      accumulate_stream(streams[i], statics, opt, gate, window, parts[k]);
  }
  CalibrationShard out(opt.bins.size(), opt.sketch_k);
  for (const auto& p : parts) out.merge(p);
  return out;
}

QuantileTable finalize(CalibrationShard shard, const CalibrationOptions& opt, double gate,
                       const TrainingWindow& window) {
  QuantileTable t;
  t.bins = opt.bins;
  t.gate_p = opt.gate_p;
  t.gate_value = gate;
  t.window = window;
  t.cog_mode = opt.cog_mode;
  t.messages_per_bin = std::move(shard.messages_per_bin);
  for (Metric m : kMetrics)
    for (auto& s : shard.sketches[idx(m)]) t.functions[idx(m)].push_back(QuantileFunction::from_sketch(std::move(s)));
  return t;
}

QuantileTable calibrate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                        const CalibrationOptions& opt) {
  check_options(opt);
  check_static_data(streams, statics, opt);
  const TrainingWindow window = training_window(streams, opt);
  const double gate = temporal_gate(streams, opt, window);
  return finalize(accumulate(streams, statics, opt, gate, window), opt, gate, window);
}

namespace serial {

QuantileTable calibrate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                        const CalibrationOptions& opt) {
  check_options(opt);
  check_static_data(streams, statics, opt);
  const TrainingWindow window = training_window(streams, opt);
  QuantileSketch dt(opt.sketch_k);
  for (const auto& s : streams)
    for_each_pair(s, window, [&](const AisMessage& a, const AisMessage& b) { dt.add(b.recv_time - a.recv_time); });
  const double gate = gate_from(dt, opt.gate_p);
  CalibrationShard all(opt.bins.size(), opt.sketch_k);
  for (const auto& s : streams) accumulate_stream(s, statics, opt, gate, window, all);
  return finalize(std::move(all), opt, gate, window);
}

}  // namespace serial

SplitThresholds thresholds(const QuantileTable& table, std::optional<double> ship_length, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  const std::optional<std::size_t> bin =
      ship_length ? std::optional<std::size_t>(table.bins.index_of(*ship_length)) : std::nullopt;
  SplitThresholds th;
  th.alpha = alpha;
  th.cog_mode = table.cog_mode;
  th.s = table.lookup(Metric::DsogAbs, bin)(1.0 - alpha);
  const auto& rot = table.lookup(Metric::Rot, bin);
  th.r_lo = rot(alpha / 2.0);
  th.r_hi = rot(1.0 - alpha / 2.0);
  th.t = table.lookup(Metric::Dt, bin)(1.0 - alpha);
  th.d = table.lookup(Metric::Dist, bin)(1.0 - alpha);
  const auto& gap = table.lookup(Metric::SpeedGap, bin);
  th.b_lo = gap(alpha / 2.0);
  th.b_hi = gap(1.0 - alpha / 2.0);
  return th;
}

namespace {

nlohmann::json function_json(const QuantileFunction& f) {
  nlohmann::json j = {{"count", f.count}, {"grid", f.grid}};
  if (f.sketch) j["sketch"] = f.sketch->to_json();
  return j;
}

QuantileFunction function_from(const nlohmann::json& j) {
  QuantileFunction f;
  f.count = j.at("count").get<std::uint64_t>();
  f.grid = j.at("grid").get<std::vector<double>>();
  if (!f.grid.empty() && f.grid.size() != kGridSize) throw Error(ErrorCode::SchemaMismatch, "grid size");
  if (!std::is_sorted(f.grid.begin(), f.grid.end())) throw Error(ErrorCode::SchemaMismatch, "grid not monotone");
  if (j.contains("sketch")) f.sketch = QuantileSketch::from_json(j.at("sketch"));
  return f;
}

}  // namespace

nlohmann::json to_json(const QuantileTable& t) {
  nlohmann::json j;
  j["version"] = t.version;
  nlohmann::json labels = nlohmann::json::array();
  for (std::size_t b = 0; b < t.bins.size(); ++b) labels.push_back(t.bins.label(b));
  j["bins"] = {{"edges_m", t.bins.edges}, {"labels", labels}};
  std::vector<double> ps(kGridSize);
  for (std::size_t i = 0; i < kGridSize; ++i) ps[i] = grid_p(i);
  j["p_grid"] = ps;
  j["gate_p"] = t.gate_p;
  j["gate_value_seconds"] = t.gate_value;
  j["training_window"] = {{"start", t.window.start}, {"end", t.window.end}};
  j["cog_difference"] = t.cog_mode == CogDifference::Wrapped ? "wrapped" : "raw";
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t b = 0; b < t.messages_per_bin.size(); ++b) counts[t.bins.label(b)] = t.messages_per_bin[b];
  j["messages_per_bin"] = counts;
  nlohmann::json metrics = nlohmann::json::object();
  for (Metric m : kMetrics) {
    nlohmann::json per_bin = nlohmann::json::object();
    const auto& fs = t.functions[idx(m)];
    for (std::size_t b = 0; b < fs.size(); ++b)
      per_bin[m == Metric::Dt || b + 1 == fs.size() ? std::string("pooled") : t.bins.label(b)] = function_json(fs[b]);
    metrics[std::string(to_string(m))] = per_bin;
  }
  j["metrics"] = metrics;
  return j;
}

QuantileTable table_from_json(const nlohmann::json& j) {
  try {
    QuantileTable t;
    t.version = j.at("version").get<int>();
    if (t.version != kTableVersion)
      throw Error(ErrorCode::SchemaVersionMismatch,
                  "table version " + std::to_string(t.version) + ", expected " + std::to_string(kTableVersion));
    t.bins.edges = j.at("bins").at("edges_m").get<std::vector<double>>();
    t.bins.validate();
    const auto ps = j.at("p_grid").get<std::vector<double>>();
    if (ps.size() != kGridSize) throw Error(ErrorCode::SchemaMismatch, "p_grid size");
    for (std::size_t i = 0; i < kGridSize; ++i)
      if (std::abs(ps[i] - grid_p(i)) > 1e-12) throw Error(ErrorCode::SchemaMismatch, "p_grid values");
    t.gate_p = j.at("gate_p").get<double>();
    t.gate_value = j.at("gate_value_seconds").get<double>();
    t.window = {j.at("training_window").at("start").get<double>(), j.at("training_window").at("end").get<double>()};
    t.cog_mode = j.value("cog_difference", std::string("wrapped")) == "raw" ? CogDifference::Raw
                                                                             : CogDifference::Wrapped;
    t.messages_per_bin.assign(t.bins.size() + 1, 0);
    if (j.contains("messages_per_bin"))
      for (std::size_t b = 0; b <= t.bins.size(); ++b)
        t.messages_per_bin[b] = j["messages_per_bin"].value(t.bins.label(b), std::uint64_t{0});
    const auto& metrics = j.at("metrics");
    for (Metric m : kMetrics) {
      const auto& per_bin = metrics.at(std::string(to_string(m)));
      auto& fs = t.functions[idx(m)];
      if (m != Metric::Dt)
        for (std::size_t b = 0; b < t.bins.size(); ++b)
          fs.push_back(per_bin.contains(t.bins.label(b)) ? function_from(per_bin.at(t.bins.label(b)))
                                                         : QuantileFunction{});
      fs.push_back(per_bin.contains("pooled") ? function_from(per_bin.at("pooled")) : QuantileFunction{});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, e.what());
  }
}

void save_table(const QuantileTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << to_json(table).dump() << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

QuantileTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
  }
  return table_from_json(j);
}

}  // namespace aistrack
