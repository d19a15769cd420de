// Prints one [PASS]/[FAIL] line per acceptance criterion. Exit status is the
// number of failed criteria.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "aistrack/assess.hpp"
#include "aistrack/baselines.hpp"
#include "aistrack/cli.hpp"
#include "aistrack/decode.hpp"
#include "aistrack/decode_batch.hpp"
#include "aistrack/export.hpp"
#include "aistrack/filters.hpp"
#include "aistrack/hull.hpp"
#include "aistrack/nmea.hpp"
#include "aistrack/quantiles.hpp"
#include "aistrack/splitter.hpp"
#include "aistrack/synth.hpp"
#include "../oracles/bitslicer.hpp"
#include "../oracles/brute_hull.hpp"
#include "../oracles/sort_quantile.hpp"
#include "../unit/helpers.hpp"

using namespace aistrack;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    } else if (!ok) {
      detail += "; " + what;
    }
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SplitThresholds kSmall{4.7, -1.067, 0.840, 391.0, 1.001, -3.237, 4.022, 0.05, CogDifference::Wrapped};

double deg_north(double nm) { return nm * kMetersPerNauticalMile / kEarthRadius * 180.0 / std::numbers::pi; }

Trajectory trajectory_of(const std::vector<LatLon>& pts) {
  Trajectory t{1, {}, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.messages.push_back(testutil::msg(static_cast<double>(i) * 10.0, pts[i].lat, pts[i].lon));
    t.source.push_back(i);
  }
  return t;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string type1 = "!AIVDM,1,1,,,13`dUP0P000GqBjMw`im0wvD0000,0*01";
  const std::string type5a = "!AIVDM,2,1,7,B,539g?6T00000@8i6221HU=E8LU>222222222220j1h5334@P04hTQCADR,0*15";
  const std::string type5b = "!AIVDM,2,2,7,B,0EQC`888888880,2*27";

  auto checksum_ok = [](const std::string& line) {
    const auto star = line.find('*');
    return nmea_checksum(std::string_view(line).substr(1, star - 1)) ==
           static_cast<std::uint8_t>(std::stoi(line.substr(star + 1), nullptr, 16));
  };
  o.require(checksum_ok(type1) && checksum_ok(type5a) && checksum_ok(type5b), "checksum");

  const RawSentence s1 = parse_sentence(type1);
  const AisMessage m = decode_dynamic(dearmor(s1.payload, s1.fill_bits));
  const auto p = oracle::position(oracle::to_bits(s1.payload, s1.fill_bits));
  o.require(m.msg_type == p.type && m.mmsi == p.mmsi && m.sog == p.sog_tenths / 10.0 && m.cog == p.cog_tenths / 10.0 &&
                m.lon == static_cast<double>(p.lon_raw) / 600000.0 && m.lat == static_cast<double>(p.lat_raw) / 600000.0,
            "type 1 differs from the bit slicer");

  const std::vector<RawSentence> parts{parse_sentence(type5a), parse_sentence(type5b)};
  const VesselStatic v = decode_static(assemble(parts));
  const auto q = oracle::voyage(oracle::to_bits(parts[0].payload, parts[0].fill_bits) +
                                oracle::to_bits(parts[1].payload, parts[1].fill_bits));
  o.require(v.mmsi == q.mmsi && v.ship_type == std::optional<int>(q.ship_type) &&
                v.ship_length == std::optional<double>(q.to_bow + q.to_stern),
            "type 5 differs from the bit slicer");

  std::mt19937_64 rng(101);
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    DynamicFields f;
    const int types[] = {1, 2, 3, 18};
    f.msg_type = types[pick(0, 3)];
    f.mmsi = static_cast<Mmsi>(pick(0, (1 << 30) - 1));
    f.sog_tenths = static_cast<int>(pick(0, 1023));
    f.lon_raw = pick(-108000000, 108000000);
    f.lat_raw = pick(-54000000, 54000000);
    f.cog_tenths = static_cast<int>(pick(0, 3600));
    const RawSentence parsed = parse_sentence(to_string(make_sentences(encode_dynamic(f), std::nullopt, 'A')[0]));
    const auto bits = oracle::to_bits(parsed.payload, parsed.fill_bits);
    const auto r = oracle::position(bits);
    const DynamicFields back = to_fields(decode_dynamic(dearmor(parsed.payload, parsed.fill_bits)));
    if (r.type != f.msg_type || r.mmsi != f.mmsi || r.sog_tenths != f.sog_tenths || r.lon_raw != f.lon_raw ||
        r.lat_raw != f.lat_raw || r.cog_tenths != f.cog_tenths || back.msg_type != f.msg_type || back.mmsi != f.mmsi ||
        back.sog_tenths != f.sog_tenths || back.lon_raw != f.lon_raw || back.lat_raw != f.lat_raw ||
        back.cog_tenths != f.cog_tenths)
      ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of 1000 round trips differ");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail = "both reference sentences match the bit slicer, 1000/1000 round trips";
  return o;
}

// Streams whose consecutive pairs give one million samples of every metric.
std::vector<MessageStream> quantile_corpus(std::map<Mmsi, VesselStatic>& statics) {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> dt(1, 10);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<MessageStream> streams;
  for (Mmsi k = 0; k < 20; ++k) {
    const Mmsi mmsi = 219100000 + k;
    statics[mmsi] = VesselStatic{mmsi, 60.0, 70};
    MessageStream s{mmsi, {}};
    AisMessage m = testutil::msg(1.6e9, 56.0, 9.0, 12.0, 45.0, mmsi);
    for (int i = 0; i <= 50000; ++i) {
      s.messages.push_back(m);
      const double step = static_cast<double>(dt(rng));
      m.recv_time += step;
      const double heading = m.cog * std::numbers::pi / 180.0;
      const double nm = m.sog * step / kSecondsPerHour * (1.0 + 0.2 * noise(rng));
      m.lat += deg_north(nm * std::cos(heading));
      m.lon += deg_north(nm * std::sin(heading)) / std::cos(m.lat * std::numbers::pi / 180.0);
      m.sog = std::clamp(m.sog + 0.5 * noise(rng), 2.0, 25.0);
      m.cog = std::fmod(m.cog + 3.0 * noise(rng) + 360.0, 360.0);
      if (m.lat > 59.5 || m.lat < 53.0 || m.lon > 13.5 || m.lon < 5.5) m.cog = std::fmod(m.cog + 180.0, 360.0);
    }
    streams.push_back(std::move(s));
  }
  return streams;
}

struct RankCheck {
  double worst = 0.0;
  std::size_t grids = 0;
};

std::pair<std::uint64_t, std::uint64_t> rank_interval(const std::vector<double>& sorted, double v) {
  return {static_cast<std::uint64_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1,
          static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin())};
}

Outcome ac2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::map<Mmsi, VesselStatic> statics;
  const auto streams = quantile_corpus(statics);
  const CalibrationOptions opt;
  const QuantileTable single = calibrate(streams, statics, opt);

  const TrainingWindow window = training_window(streams, opt);
  const double gate = temporal_gate(streams, opt, window);
  const std::size_t half = streams.size() / 2;
  const std::span<const MessageStream> all(streams);
  CalibrationShard shard = accumulate(all.first(half), statics, opt, gate, window);
  shard.merge(accumulate(all.subspan(half), statics, opt, gate, window));
  const QuantileTable merged = finalize(std::move(shard), opt, gate, window);

  std::map<Metric, std::vector<double>> samples;
  for (const auto& s : streams)
    for (std::size_t i = 0; i + 1 < s.messages.size(); ++i) {
      const auto pm = pair_metrics(s.messages[i], s.messages[i + 1]);
      if (pm.forced_split()) continue;
      samples[Metric::Dt].push_back(pm.dt);
      if (pm.dt > gate) continue;
      samples[Metric::DsogAbs].push_back(std::abs(pm.dsog));
      samples[Metric::Rot].push_back(pm.rot);
      samples[Metric::Dist].push_back(pm.dist);
      samples[Metric::SpeedGap].push_back(pm.speed_gap);
    }

  const std::size_t bin = single.bins.index_of(60.0);
  double worst = 0.0, worst_between = 0.0;
  std::size_t min_n = SIZE_MAX;
  for (auto& [metric, v] : samples) {
    std::sort(v.begin(), v.end());
    min_n = std::min(min_n, v.size());
    const std::optional<std::size_t> b = metric == Metric::Dt ? std::nullopt : std::optional<std::size_t>(bin);
    const auto& fs = single.lookup(metric, b);
    const auto& fm = merged.lookup(metric, b);
    o.require(fs.count == v.size() && fm.count == v.size(), std::string(to_string(metric)) + " count");
    const double n = static_cast<double>(v.size());
    for (std::uint64_t i = 1; i < 200; ++i) {
      const auto target = oracle::grid_rank(i, v.size());
      worst = std::max({worst, oracle::rank_error(v, fs.grid[i - 1], target), oracle::rank_error(v, fm.grid[i - 1], target)});
      const auto a = rank_interval(v, fs.grid[i - 1]);
      const auto c = rank_interval(v, fm.grid[i - 1]);
      const double gap = a.second < c.first   ? static_cast<double>(c.first - a.second)
                         : c.second < a.first ? static_cast<double>(a.first - c.second)
                                              : 0.0;
      worst_between = std::max(worst_between, gap / n);
    }
  }
  o.require(min_n >= 1000000, "only " + std::to_string(min_n) + " samples in the smallest metric");
  o.require(worst <= 0.005, "rank error " + fmt(worst));
  o.require(worst_between <= 0.005, "merged vs single-shot rank gap " + fmt(worst_between));
  const double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + fmt(t) + " s");
  if (o.pass)
    o.detail = std::to_string(min_n) + "+ samples per metric, worst rank error " + fmt(worst * 100) +
               "%, merged vs single-shot " + fmt(worst_between * 100) + "%";
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FleetOptions fo;
  const Fleet fleet = synth_fleet(fo);
  std::size_t total = 0;
  for (const auto& s : fleet.streams) total += s.messages.size();
  std::set<std::size_t> length_bins;
  const LengthBins bins;
  for (const auto& [mmsi, st] : fleet.statics)
    if (st.ship_length) length_bins.insert(bins.index_of(*st.ship_length));
  o.require(total == 10000 && fleet.streams.size() == 20 && fleet.injections.size() == 50, "fleet shape");
  o.require(length_bins.size() > 1, "lengths not mixed");

  std::set<std::pair<Mmsi, std::size_t>> expected, found;
  std::set<unsigned> kinds;
  for (const auto& inj : fleet.injections) {
    expected.insert({inj.mmsi, inj.index});
    kinds.insert(expected_reason(inj.kind));
  }
  o.require(kinds.size() == 5, "not all five anomaly kinds injected");
  std::size_t wrong_reason = 0;
  for (const auto& s : fleet.streams)
    for (std::size_t i : find_split_points(s.messages, fo.design)) found.insert({s.mmsi, i});
  for (const auto& inj : fleet.injections) {
    const auto& s = *std::find_if(fleet.streams.begin(), fleet.streams.end(),
                                  [&](const MessageStream& x) { return x.mmsi == inj.mmsi; });
    if (split_reasons(s.messages[inj.index], s.messages[inj.index + 1], fo.design) != expected_reason(inj.kind))
      ++wrong_reason;
  }
  std::size_t tp = 0;
  for (const auto& f : found) tp += expected.count(f);
  const double precision = found.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(found.size());
  const double recall = static_cast<double>(tp) / static_cast<double>(expected.size());
  o.require(precision == 1.0 && recall == 1.0, "precision " + fmt(precision) + ", recall " + fmt(recall));
  o.require(wrong_reason == 0, std::to_string(wrong_reason) + " injections fire another condition");
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail = "50/50 injections recovered, precision = recall = 1";
  return o;
}

Outcome ac4() {
  Outcome o;
  const Fleet fleet = synth_fleet();
  const QuantileTable table = calibrate(fleet.streams, fleet.statics);
  std::size_t n_in = 0;
  for (const auto& s : fleet.streams) n_in += s.messages.size();
  std::vector<std::size_t> counts;
  std::size_t fired = 0, pairs = 0;
  for (double alpha : {0.01, 0.05, 0.1}) {
    const ExtractResult r = extract_all(fleet.streams, fleet.statics, &table, alpha);
    std::size_t kept = 0;
    for (const auto& [mmsi, ship] : r.ships) {
      const auto th = thresholds(table, ship.info.ship_length, alpha);
      for (const auto& t : ship.trajectories) {
        kept += t.size();
        for (std::size_t i = 0; i + 1 < t.size(); ++i, ++pairs)
          if (split_reasons(t.messages[i], t.messages[i + 1], th) != 0U) ++fired;
      }
    }
    o.require(kept + r.stats.singletons_dropped == n_in, "messages not conserved at alpha " + fmt(alpha));
    counts.push_back(r.stats.split_points);
  }
  o.require(fired == 0, std::to_string(fired) + " pairs fire a condition");
  o.require(counts[0] <= counts[1] && counts[1] <= counts[2], "split counts not monotone");
  if (o.pass)
    o.detail = std::to_string(pairs) + " pairs clean; split points " + std::to_string(counts[0]) + " <= " +
               std::to_string(counts[1]) + " <= " + std::to_string(counts[2]);
  return o;
}

Outcome ac5() {
  Outcome o;
  MessageStream s = testutil::straight(60);
  s.messages[30].lat += deg_north(3.0);
  const SplitOutcome cut = split(s, kSmall);
  const auto joined = rejoin(cut.trajectories, kSmall);
  o.require(joined.size() == 1, std::to_string(joined.size()) + " trajectories");
  if (joined.size() == 1) {
    const auto& t = joined[0];
    bool same = t.size() == 59;
    for (std::size_t i = 0, j = 0; same && i < 60; ++i) {
      if (i == 30) continue;
      same = t.messages[j] == s.messages[i] && t.source[j] == i;
      ++j;
    }
    o.require(same, "messages other than the outlier not conserved");
  }
  if (o.pass) o.detail = "1 trajectory of 59 messages, outlier removed";
  return o;
}

Outcome ac6() {
  Outcome o;
  const double circ = 2.0 * std::numbers::pi * 6371000.0;
  const double quarter = haversine({0, 0}, {0, 90});
  const double half = haversine({0, 0}, {0, 180});
  const double meridian = haversine({-45, 20}, {45, 20});
  o.require(std::abs(quarter / (circ / 4) - 1) <= 1e-9 && std::abs(half / (circ / 2) - 1) <= 1e-9 &&
                std::abs(meridian / (circ / 4) - 1) <= 1e-9,
            "haversine arcs");

  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-5000, 5000);
  double worst_hull = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> pts;
    std::vector<oracle::P> ops;
    for (int i = 0; i < 50; ++i) {
      pts.push_back({u(rng), u(rng)});
      ops.push_back({pts.back().x, pts.back().y});
    }
    const double expect = oracle::brute_hull_area(ops);
    worst_hull = std::max(worst_hull, std::abs(polygon_area(convex_hull(pts)) / expect - 1));
  }
  o.require(worst_hull <= 1e-9, "hull relative error " + fmt(worst_hull));

  const auto bb = BoundingBox::study_area();
  std::uniform_real_distribution<double> lat(bb.lat_min, bb.lat_max), lon(bb.lon_min, bb.lon_max);
  std::uniform_real_distribution<double> off(-0.3, 0.3);
  double worst_utm = 0.0;
  std::size_t tested = 0;
  while (tested < 1000) {
    const LatLon a{lat(rng), lon(rng)};
    const LatLon b{a.lat + off(rng), a.lon + off(rng)};
    const double h = haversine(a, b);
    if (h >= 50000.0 || h < 100.0) continue;
    const std::vector<LatLon> path{a, b};
    const auto p = to_utm(std::span<const LatLon>(path));
    const double e = std::hypot(p[1].easting - p[0].easting, p[1].northing - p[0].northing);
    worst_utm = std::max(worst_utm, std::abs(e / h - 1));
    ++tested;
  }
  o.require(worst_utm <= 1e-3, "UTM vs haversine " + fmt(worst_utm));
  if (o.pass)
    o.detail = "arcs exact to 1e-9, hull error " + fmt(worst_hull, 2) + ", UTM vs haversine " + fmt(worst_utm * 100, 3) + "%";
  return o;
}

Outcome ac7() {
  Outcome o;
  const double straight = avg_abs_course_change(trajectory_of({{10, 0}, {10, 1}, {10, 2}, {10, 3}}));
  const double square = avg_abs_course_change(trajectory_of({{10, 0}, {10, 1}, {11, 1}, {11, 2}, {12, 2}, {12, 3}}));
  const double back = avg_abs_course_change(trajectory_of({{10, 0}, {10, 1}, {10, 0}, {10, 1}}));
  o.require(std::abs(straight) <= 1e-9, "collinear gives " + fmt(straight));
  o.require(std::abs(square - 90) <= 1e-9, "right angles give " + fmt(square));
  o.require(std::abs(back - 180) <= 1e-9, "out-and-back gives " + fmt(back));
  double prev = 180.0 + 1e-9;
  for (int i = 0; i <= 100; ++i) {
    const double c = -1.0 + 2.0 * i / 100.0;
    const double d = course_change_from_complexity(c);
    if (d > prev || std::abs(d - std::acos(c) * 180.0 / std::numbers::pi) > 1e-9) o.require(false, "antitone at c = " + fmt(c));
    prev = d;
  }
  if (o.pass) o.detail = "0, 90 and 180 degrees; antitone on 101 points";
  return o;
}

Outcome ac8() {
  Outcome o;
  // Zhao: pair 3-4 has a 601 s gap, pair 6-7 moves at 16 kn, pairs 1-2 (600 s) and 8-9 (14 kn) stay.
  MessageStream z{1, {}};
  double t = 0.0, lat = 55.0;
  const std::vector<std::pair<double, double>> legs{{10, 0.01}, {600, 0.01}, {10, 0.01}, {601, 0.01}, {10, 0.01},
                                                     {10, 0.01}, {100, 16.0 * 100 / 3600}, {10, 0.01}, {100, 14.0 * 100 / 3600}};
  z.messages.push_back(testutil::msg(t, lat, 10, 5, 0, 1));
  for (const auto& [dt, nm] : legs) {
    t += dt;
    lat += deg_north(nm);
    z.messages.push_back(testutil::msg(t, lat, 10, 5, 0, 1));
  }
  const ZhaoResult zr = split_zhao(z);
  o.require(zr.split_points == std::vector<std::size_t>{3, 6}, "zhao split points");

  MessageStream g = testutil::straight(20);
  g.messages[12].lat += deg_north(5.0);
  const GuoResult gr = filter_guo(g, 10.0, 30.0);
  o.require(gr.dropped == std::vector<std::size_t>{12}, "guo drops");
  o.require(gr.kept.messages.size() + gr.dropped.size() == g.messages.size(), "guo conservation");

  std::map<std::string, MethodResult> methods;
  methods["zhao"] = MethodResult{split_zhao(g).trajectories, split_zhao(g).split_points.size()};
  Trajectory kept{g.mmsi, gr.kept.messages, gr.kept_indices};
  methods["guo"] = MethodResult{{kept}, std::nullopt};
  const auto report = compare(methods, g);
  const std::string csv = comparison_csv(report);
  for (const char* col : {"discarded_messages", "split_points", "max_turning_rate_deg_s", "max_speed_change_kn_s",
                          "max_distance_nm"})
    o.require(csv.find(col) != std::string::npos, std::string("missing column ") + col);
  for (const auto& row : report)
    o.require(row.max_distance.witness && row.max_speed_change.witness && row.max_turning_rate.witness,
              row.method + " without witness");
  if (o.pass) o.detail = "zhao splits at {3, 6}, guo drops {12}, five columns with witnesses";
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = testutil::slurp(e.path());
  return files;
}

Outcome ac9() {
  Outcome o;
  testutil::TempDir root;
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream err;
    const int code = cli::run(args, sink, err);
    if (code != 0) o.require(false, args[0] + " exited " + std::to_string(code) + ": " + err.str());
  };
  run({"synth", "--out", (root / "raw").string()});

  std::vector<std::map<std::string, std::string>> outputs;
  double slowest = 0.0;
  for (const char* name : {"a", "b"}) {
    const fs::path d = root / name;
    const auto t0 = std::chrono::steady_clock::now();
    run({"decode", "--source", (root / "raw").string(), "--dest", (d / "decoded").string()});
    const std::string dyn = (d / "decoded" / "dynamic").string(), sta = (d / "decoded" / "static").string();
    run({"calibrate", "--decoded", dyn, "--static", sta, "--out", (d / "table.json").string()});
    run({"extract", "--decoded", dyn, "--static", sta, "--table", (d / "table.json").string(), "--alpha", "0.03",
         "--out", (d / "extract").string()});
    run({"assess", "--trajectories", (d / "extract" / "trajectories.csv").string(), "--out", (d / "assess").string(),
         "--min-msgs", "50", "--min-hull-area", "3e5", "--heatmap", "500"});
    slowest = std::max(slowest, seconds_since(t0));
    outputs.push_back(snapshot(d));
  }
  o.require(!outputs[0].empty() && outputs[0] == outputs[1], "outputs differ between runs");
  o.require(slowest < 60.0, "pipeline took " + fmt(slowest) + " s");

  // Decode throughput on type-1 sentences, one thread.
  std::mt19937_64 rng(404);
  std::vector<RawRecord> records;
  for (int i = 0; i < 200000; ++i) {
    DynamicFields f;
    f.msg_type = 1;
    f.mmsi = 219000000 + static_cast<Mmsi>(i % 500);
    f.sog_tenths = static_cast<int>(rng() % 300);
    f.lon_raw = static_cast<std::int64_t>(rng() % 6000000) + 3000000;
    f.lat_raw = static_cast<std::int64_t>(rng() % 6000000) + 31000000;
    f.cog_tenths = static_cast<int>(rng() % 3600);
    records.push_back(RawRecord{1.6e9 + i, "DK", to_string(make_sentences(encode_dynamic(f), std::nullopt, 'A')[0])});
  }
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto t0 = std::chrono::steady_clock::now();
  const DecodeBatch batch = decode_records(records);
  const double rate = static_cast<double>(records.size()) / seconds_since(t0);
  omp_set_num_threads(threads);
  o.require(batch.stats.dynamic == records.size(), "throughput batch did not decode fully");
  o.require(rate >= 100000.0, "decode rate " + fmt(rate, 6) + " sentences/s");
  if (o.pass)
    o.detail = std::to_string(outputs[0].size()) + " files byte-identical, pipeline " + fmt(slowest, 3) + " s, decode " +
               fmt(rate / 1000.0, 4) + "k sentences/s";
  return o;
}

Outcome ac10() {
  Outcome o;
  const FleetOptions fo;
  const Fleet fleet = synth_fleet(fo);
  std::vector<RawRecord> records;
  for (const auto& line : fleet_nmea(fleet, fo)) {
    auto [tag, sentence] = split_tag_block(line);
    records.push_back(RawRecord{tag.unix_time, tag.station.value_or(""), std::string(sentence)});
  }
  const DecodeBatch batch = decode_records(records);
  o.require(batch.stats.reconciles() && batch.stats.sentences == records.size(), "decode counts");

  std::vector<AisMessage> messages;
  for (const auto& r : batch.dynamic) messages.push_back(r.message);
  std::stable_sort(messages.begin(), messages.end(),
                   [](const AisMessage& a, const AisMessage& b) { return a.recv_time < b.recv_time; });
  const auto unique = dedupe(messages);
  std::size_t fleet_total = 0;
  for (const auto& s : fleet.streams) fleet_total += s.messages.size();
  o.require(unique.size() == fleet_total, "dedupe kept " + std::to_string(unique.size()) + " of " +
                                              std::to_string(fleet_total) + " distinct reports");

  const auto bb = BoundingBox::study_area();
  const FilterResult filtered = filter_messages(unique, bb);
  o.require(filtered.kept.size() + filtered.dropped.total() == unique.size(), "filter counts");

  const auto streams = group_by_mmsi(filtered.kept);
  std::size_t grouped = 0;
  for (const auto& s : streams) grouped += s.messages.size();
  o.require(grouped == filtered.kept.size(), "grouping counts");

  const QuantileTable table = calibrate(streams, fleet.statics);
  const ExtractResult r = extract_all(streams, fleet.statics, &table, 0.05);
  std::size_t kept = 0, in_bounds_positions = 0;
  for (const auto& [mmsi, ship] : r.ships)
    for (const auto& t : ship.trajectories) {
      kept += t.size();
      for (const auto& m : t.messages) in_bounds_positions += in_bounds(m, bb) ? 1 : 0;
    }
  o.require(kept + r.stats.singletons_dropped == r.stats.messages && r.stats.messages == grouped, "extract counts");

  for (const auto& s : streams) {
    const GuoResult g = filter_guo(s, 10.0, 30.0);
    std::size_t z = 0;
    for (const auto& t : split_zhao(s).trajectories) z += t.size();
    if (g.kept.messages.size() + g.dropped.size() != s.messages.size() || z != s.messages.size())
      o.require(false, "baseline counts for " + std::to_string(s.mmsi));
  }

  const Inspection insp = inspect(r.ships, {too_few_messages(50), hull_area_below(3e5)});
  std::size_t acc = 0, rej = 0, total_traj = 0;
  for (const auto& [m, s] : insp.accepted) acc += s.trajectories.size();
  for (const auto& [m, s] : insp.rejected) rej += s.trajectories.size();
  for (const auto& [m, s] : r.ships) total_traj += s.trajectories.size();
  o.require(acc + rej == total_traj, "inspection counts");

  const DensityGrid grid = density_grid(r.ships, bb, 500);
  o.require(grid.total() == in_bounds_positions, "grid total " + std::to_string(grid.total()));
  if (o.pass)
    o.detail = std::to_string(records.size()) + " sentences -> " + std::to_string(unique.size()) + " reports -> " +
               std::to_string(kept) + " kept + " + std::to_string(r.stats.singletons_dropped) +
               " dropped; grid sums to " + std::to_string(grid.total());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"decoder vectors", ac1},       {"quantile oracle equivalence", ac2}, {"split-point soundness", ac3},
      {"post-split invariant", ac4},  {"rejoin fidelity", ac5},             {"geometry oracles", ac6},
      {"course change laws", ac7},    {"baseline behavior", ac8},           {"determinism and throughput", ac9},
      {"conservation", ac10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double t = seconds_since(t0);
    std::printf("[%s] AC%zu %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), t);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
