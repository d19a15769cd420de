#include "aistrack/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "aistrack/assess.hpp"
#include "aistrack/baselines.hpp"
#include "aistrack/csv.hpp"
#include "aistrack/decode_batch.hpp"
#include "aistrack/error.hpp"
#include "aistrack/export.hpp"
#include "aistrack/filters.hpp"
#include "aistrack/ingest.hpp"
#include "aistrack/quantiles.hpp"
#include "aistrack/splitter.hpp"

namespace aistrack::cli {

using nlohmann::json;

namespace {

constexpr const char* kNoSendTimes = "zhao: corpus has no send timestamps, send-time filter skipped";

json to_json(const DecodeStats& s) {
  return json{{"sentences", s.sentences},
              {"no_timestamp", s.no_timestamp},
              {"malformed", s.malformed},
              {"checksum_errors", s.checksum_errors},
              {"unknown_talker", s.unknown_talker},
              {"fragments_discarded", s.fragments_discarded},
              {"fragments_pending", s.fragments_pending},
              {"sentences_in_messages", s.sentences_in_messages},
              {"messages", s.messages},
              {"dynamic", s.dynamic},
              {"static", s.static_reports},
              {"other_types", s.other_types},
              {"truncated", s.truncated},
              {"out_of_range", s.out_of_range},
              {"reconciled", s.reconciles()}};
}

bool is_raw_extension(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".csv" || ext == ".nmea" || ext == ".txt" || ext == ".log" || ext == ".ais";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());
}

template <class Writer>
void write_with(const fs::path& path, Writer&& w) {
  std::ostringstream os;
  w(os);
  write_text_file(path, os.str());
}

struct Corpus {
  std::vector<MessageStream> streams;
  std::map<Mmsi, VesselStatic> statics;
  std::size_t raw_messages = 0;
  std::size_t duplicates = 0;
  json summary;
};

Corpus load_corpus(const CorpusOptions& o) {
  o.bounds.validate();
  const auto dyn = list_day_files(o.decoded_dir);
  std::vector<fs::path> sta;
  if (o.static_dir) sta = list_day_files(*o.static_dir);
  DayFileData data = read_day_files(dyn, sta);

  std::stable_sort(data.messages.begin(), data.messages.end(),
                   [](const AisMessage& a, const AisMessage& b) { return a.recv_time < b.recv_time; });
  const auto unique = dedupe(data.messages, o.f_min);
  const FilterResult filtered = filter_messages(unique, o.bounds, o.sog_min, o.sog_max);

  Corpus c;
  c.raw_messages = data.messages.size();
  c.duplicates = data.messages.size() - unique.size();
  c.streams = group_by_mmsi(filtered.kept);
  c.statics = merge_statics(data.statics);

  std::size_t with_length = 0;
  for (const auto& s : c.streams)
    if (auto it = c.statics.find(s.mmsi); it != c.statics.end() && it->second.ship_length) ++with_length;

  const bool reconciled = data.dynamic_stats.rows == data.dynamic_stats.skipped + data.messages.size() &&
                          data.messages.size() == c.duplicates + filtered.dropped.total() + filtered.kept.size();
  c.summary = json{{"files", {{"dynamic", dyn.size()}, {"static", sta.size()}}},
                   {"rows", data.dynamic_stats.rows},
                   {"rows_skipped", data.dynamic_stats.skipped},
                   {"static_rows", data.static_stats.rows},
                   {"static_rows_skipped", data.static_stats.skipped},
                   {"messages", data.messages.size()},
                   {"duplicates", c.duplicates},
                   {"dropped", aistrack::to_json(filtered.dropped)},
                   {"kept", filtered.kept.size()},
                   {"vessels", c.streams.size()},
                   {"vessels_with_length", with_length},
                   {"reconciled", reconciled}};
  return c;
}

double percent(std::size_t part, std::size_t whole) {
  return whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0;
}

void write_ships_csv(std::ostream& out, const ShipMap& ships) {
  out << "mmsi,ship_length,ship_type\n";
  for (const auto& [mmsi, ship] : ships) {
    out << mmsi << ',';
    if (ship.info.ship_length) out << csv::format_double(*ship.info.ship_length);
    out << ',';
    if (ship.info.ship_type) out << *ship.info.ship_type;
    out << '\n';
  }
}

std::map<Mmsi, VesselStatic> read_ships_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  std::string line;
  std::vector<std::string> f;
  if (!std::getline(in, line) || !csv::split(line, f) || f != std::vector<std::string>{"mmsi", "ship_length", "ship_type"})
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": unexpected header");
  std::map<Mmsi, VesselStatic> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!csv::split(line, f) || f.size() != 3) throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + line);
    const auto mmsi = csv::to_int(f[0]);
    if (!mmsi) throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + line);
    VesselStatic s;
    s.mmsi = static_cast<Mmsi>(*mmsi);
    if (auto l = csv::to_double(f[1])) s.ship_length = *l;
    if (auto t = csv::to_int(f[2])) s.ship_type = static_cast<int>(*t);
    out[s.mmsi] = s;
  }
  return out;
}

TargetShip ship_for(const MessageStream& stream, const std::map<Mmsi, VesselStatic>& statics) {
  TargetShip ship;
  ship.mmsi = ship.info.mmsi = stream.mmsi;
  if (auto it = statics.find(stream.mmsi); it != statics.end()) ship.info = it->second;
  return ship;
}

Trajectory whole(const MessageStream& s, std::vector<AisMessage> messages, std::vector<std::size_t> source) {
  return Trajectory{s.mmsi, std::move(messages), std::move(source)};
}

json extract_counters(std::size_t raw, std::size_t duplicates, const ExtractStats& st) {
  return json{{"raw_messages", raw},
              {"duplicate_percent", percent(duplicates, raw)},
              {"split_points", st.split_points},
              {"rejoined_tracks", st.rejoined},
              {"trajectories", st.trajectories},
              {"average_length_nm", st.average_length_nm()}};
}

void require_guo_limits(const std::optional<double>& c_lim, const std::optional<double>& v_lim) {
  if (!c_lim || !v_lim) throw Error(ErrorCode::InvalidArgument, "the guo baseline needs --c-lim and --v-lim");
  if (!(*c_lim > 0.0) || !(*v_lim > 0.0)) throw Error(ErrorCode::InvalidArgument, "--c-lim and --v-lim must be positive");
}

}  // namespace

json cmd_decode(const DecodeArgs& a) {
  std::error_code ec;
  if (!fs::is_directory(a.source, ec)) throw Error(ErrorCode::FileUnreadable, a.source.string() + " is not a directory");

  std::map<std::string, std::vector<fs::path>> days;
  for (const auto& entry : fs::directory_iterator(a.source))
    if (entry.is_regular_file() && is_raw_extension(entry.path()))
      days[entry.path().stem().string()].push_back(entry.path());

  const fs::path dyn_dir = a.dest / "dynamic";
  const fs::path sta_dir = a.dest / "static";
  ensure_dir(dyn_dir);
  ensure_dir(sta_dir);

  DecodeStats total;
  json per_day = json::array();
  std::size_t files = 0;
  for (auto& [stem, paths] : days) {
    std::sort(paths.begin(), paths.end());
    std::vector<RawRecord> records;
    for (const auto& p : paths) {
      auto r = read_raw_file(p);
      records.insert(records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    files += paths.size();
    DecodeBatch batch = decode_records(records);
    std::stable_sort(batch.dynamic.begin(), batch.dynamic.end(), [](const DynamicRecord& x, const DynamicRecord& y) {
      return x.message.recv_time < y.message.recv_time;
    });
    std::stable_sort(batch.statics.begin(), batch.statics.end(),
                     [](const StaticRecord& x, const StaticRecord& y) { return x.time < y.time; });
    write_with(dyn_dir / (stem + ".csv"), [&](std::ostream& os) { write_dynamic_csv(os, batch.dynamic); });
    write_with(sta_dir / (stem + ".csv"), [&](std::ostream& os) { write_static_csv(os, batch.statics); });
    per_day.push_back(json{{"day", stem},
                           {"sentences", batch.stats.sentences},
                           {"dynamic", batch.dynamic.size()},
                           {"static", batch.statics.size()}});
    total += batch.stats;
  }
  return json{{"command", "decode"}, {"files", files}, {"days", per_day}, {"stats", to_json(total)}};
}

json cmd_calibrate(const CalibrateArgs& a) {
  if (!(a.gate_p > 0.0 && a.gate_p < 1.0)) throw Error(ErrorCode::InvalidArgument, "--gate-p must lie in (0, 1)");
  const Corpus c = load_corpus(a.corpus);

  CalibrationOptions opt;
  opt.gate_p = a.gate_p;
  opt.pooled_fallback = a.pooled_fallback;
  opt.window_seconds = a.window_days && *a.window_days > 0 ? std::optional<double>(*a.window_days * 86400.0) : std::nullopt;
  opt.cog_mode = a.raw_cog_difference ? CogDifference::Raw : CogDifference::Wrapped;
  const QuantileTable table = calibrate(c.streams, c.statics, opt);
  save_table(table, a.out_table);

  json per_bin = json::array();
  for (std::size_t b = 0; b < table.messages_per_bin.size(); ++b)
    per_bin.push_back(json{{"bin", table.bins.label(b)}, {"messages", table.messages_per_bin[b]}});
  return json{{"command", "calibrate"},
              {"corpus", c.summary},
              {"table", a.out_table.string()},
              {"gate_p", table.gate_p},
              {"gate_value_seconds", table.gate_value},
              {"training_window", {{"start", table.window.start}, {"end", table.window.end}}},
              {"messages_per_bin", per_bin}};
}

json cmd_extract(const ExtractArgs& a) {
  if (a.baseline == Baseline::Guo) require_guo_limits(a.c_lim, a.v_lim);
  std::optional<QuantileTable> table;
  if (a.baseline == Baseline::None && !a.skip_split) {
    if (!a.table) throw Error(ErrorCode::InvalidArgument, "--table is required unless --skip-split is given");
    table = load_table(*a.table);
  }
  const Corpus c = load_corpus(a.corpus);

  ShipMap ships;
  ExtractStats st;
  std::string method = "proposed";
  if (a.baseline == Baseline::None) {
    ExtractResult r = extract_all(c.streams, c.statics, table ? &*table : nullptr, a.alpha, a.skip_split);
    ships = std::move(r.ships);
    st = r.stats;
    if (a.skip_split) method = "none";
  } else {
    for (const auto& stream : c.streams) {
      TargetShip ship = ship_for(stream, c.statics);
      st.messages += stream.messages.size();
      if (a.baseline == Baseline::Zhao) {
        ZhaoResult z = split_zhao(stream);
        st.split_points += z.split_points.size();
        const std::size_t pieces = stream.messages.empty() ? 0 : z.split_points.size() + 1;
        st.rejoined += pieces - std::min(pieces, z.trajectories.size());
        ship.trajectories = std::move(z.trajectories);
      } else {
        GuoResult g = filter_guo(stream, *a.c_lim, *a.v_lim);
        st.singletons_dropped += g.dropped.size();
        if (!g.kept.messages.empty())
          ship.trajectories.push_back(whole(stream, std::move(g.kept.messages), std::move(g.kept_indices)));
      }
      for (const auto& t : ship.trajectories) st.total_length_nm += t.length_nm();
      st.trajectories += ship.trajectories.size();
      if (!ship.trajectories.empty()) ships.emplace(ship.mmsi, std::move(ship));
    }
    method = a.baseline == Baseline::Zhao ? "zhao" : "guo";
  }

  ensure_dir(a.out_dir);
  const fs::path traj_path = a.out_dir / (a.geojson ? "trajectories.geojson" : "trajectories.csv");
  write_trajectories(ships, traj_path, a.geojson ? TrajectoryFormat::GeoJson : TrajectoryFormat::Csv);
  write_with(a.out_dir / "ships.csv", [&](std::ostream& os) { write_ships_csv(os, ships); });

  json summary{{"command", "extract"},
               {"method", method},
               {"alpha", a.alpha},
               {"counters", extract_counters(c.raw_messages, c.duplicates, st)},
               {"messages_in", st.messages},
               {"messages_dropped", st.singletons_dropped},
               {"corpus", c.summary},
               {"trajectories_file", traj_path.filename().string()},
               {"warnings", a.baseline == Baseline::Zhao ? json::array({kNoSendTimes}) : json::array()}};
  write_text_file(a.out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_assess(const AssessArgs& a) {
  a.bounds.validate();
  std::ifstream in(a.trajectories, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + a.trajectories.string());
  ShipMap ships = read_trajectories_csv(in);

  fs::path ships_path = a.ships.value_or(a.trajectories.parent_path() / "ships.csv");
  std::error_code ec;
  if (a.ships || fs::exists(ships_path, ec)) {
    const auto statics = read_ships_csv(ships_path);
    for (auto& [mmsi, ship] : ships)
      if (auto it = statics.find(mmsi); it != statics.end()) ship.info = it->second;
  }

  Recipe recipe;
  if (a.min_msgs) recipe.push_back(too_few_messages(*a.min_msgs));
  if (a.min_hull_area) recipe.push_back(hull_area_below(*a.min_hull_area));
  const Inspection insp = inspect(ships, recipe);

  const TurnSpace space = a.projected_turns ? TurnSpace::Projected : TurnSpace::Degrees;
  std::vector<const Trajectory*> all;
  for (const auto& [mmsi, ship] : ships)
    for (const auto& t : ship.trajectories) all.push_back(&t);
  const auto reports = assess_all(all, space);

  std::map<std::string, std::size_t> rejected_by;
  std::vector<AssessmentReport> accepted_reports;
  ensure_dir(a.out_dir);
  write_with(a.out_dir / "assessment.csv", [&](std::ostream& os) {
    os << "mmsi,traj_id,n_msg,hull_area_m2,avg_complexity,avg_abs_course_change_deg,status\n";
    std::size_t k = 0;
    for (const auto& [mmsi, ship] : ships) {
      for (std::size_t i = 0; i < ship.trajectories.size(); ++i, ++k) {
        const auto& r = reports[k];
        std::string status = "accepted";
        for (const auto& rule : recipe)
          if (rule.reject(ship.trajectories[i])) {
            status = rule.name;
            break;
          }
        if (status == "accepted")
          accepted_reports.push_back(r);
        else
          ++rejected_by[status];
        os << mmsi << ',' << i << ',' << r.n_msg << ',' << csv::format_double(r.hull_area) << ','
           << (r.avg_complexity ? csv::format_double(*r.avg_complexity) : "") << ','
           << (r.avg_abs_course_change ? csv::format_double(*r.avg_abs_course_change) : "") << ',' << status << '\n';
      }
    }
  });

  const PixelMap pm = pixel_map(accepted_reports);
  write_with(a.out_dir / "pixel_map.csv", [&](std::ostream& os) { write_pixel_map_csv(os, pm); });
  write_text_file(a.out_dir / "pixel_map.json", pixel_map_manifest(pm).dump(2) + "\n");

  const auto averages = ship_type_hull_average(insp.accepted);
  write_with(a.out_dir / "ship_types.csv", [&](std::ostream& os) {
    os << "ship_type,mean_hull_area_m2\n";
    for (const auto& [type, mean] : averages) os << type << ',' << csv::format_double(mean) << '\n';
  });

  std::size_t accepted = 0;
  for (const auto& [mmsi, ship] : insp.accepted) accepted += ship.trajectories.size();
  json summary{{"command", "assess"},
               {"trajectories", all.size()},
               {"accepted", accepted},
               {"rejected", all.size() - accepted},
               {"rejected_by", rejected_by},
               {"pixel_map_cells", pm.occupied()},
               {"ship_types", averages}};

  if (a.heatmap) {
    if (*a.heatmap == 0) throw Error(ErrorCode::InvalidArgument, "--heatmap needs at least one pixel");
    const DensityGrid grid = density_grid(insp.accepted, a.bounds, *a.heatmap);
    write_with(a.out_dir / "density_grid.csv", [&](std::ostream& os) { write_grid_csv(os, grid); });
    write_text_file(a.out_dir / "density_grid.json", grid_manifest(grid).dump(2) + "\n");
    summary["heatmap"] = json{{"npixels", grid.npixels}, {"positions", grid.total()}};
  }
  write_text_file(a.out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_compare(const CompareArgs& a) {
  require_guo_limits(a.c_lim, a.v_lim);
  const QuantileTable table = load_table(a.table);
  const Corpus c = load_corpus(a.corpus);

  const std::vector<std::string> order{"zhao", "guo", "proposed"};
  std::map<std::string, ComparisonRow> totals;
  for (const auto& name : order) {
    totals[name].method = name;
    if (name != "guo") totals[name].split_points = 0;
  }
  for (const auto& stream : c.streams) {
    std::optional<double> length;
    if (auto it = c.statics.find(stream.mmsi); it != c.statics.end()) length = it->second.ship_length;
    const SplitThresholds th = thresholds(table, length, a.alpha);

    std::map<std::string, MethodResult> methods;
    SplitOutcome so = split(stream, th);
    methods["proposed"] = MethodResult{rejoin(std::move(so.trajectories), th), so.split_points.size()};
    ZhaoResult z = split_zhao(stream);
    methods["zhao"] = MethodResult{std::move(z.trajectories), z.split_points.size()};
    GuoResult g = filter_guo(stream, a.c_lim, a.v_lim);
    MethodResult guo;
    if (!g.kept.messages.empty()) guo.trajectories.push_back(whole(stream, std::move(g.kept.messages), std::move(g.kept_indices)));
    methods["guo"] = std::move(guo);

    for (const auto& row : compare(methods, stream)) totals[row.method].absorb(row);
  }

  ComparisonReport report;
  for (const auto& name : order) report.push_back(totals[name]);
  const std::string text = comparison_csv(report);
  if (a.out.has_parent_path()) ensure_dir(a.out.parent_path());
  write_text_file(a.out, text);

  json rows = json::array();
  for (const auto& r : report) {
    auto max_json = [](const MaxValue& m) {
      json j{{"value", m.value}};
      if (m.witness) j["witness"] = json{{"mmsi", m.witness->mmsi}, {"index", m.witness->index}};
      return j;
    };
    rows.push_back(json{{"method", r.method},
                        {"discarded", r.discarded},
                        {"split_points", r.split_points ? json(*r.split_points) : json(nullptr)},
                        {"max_turning_rate", max_json(r.max_turning_rate)},
                        {"max_speed_change", max_json(r.max_speed_change)},
                        {"max_distance", max_json(r.max_distance)}});
  }
  return json{{"command", "compare"}, {"alpha", a.alpha}, {"corpus", c.summary}, {"rows", rows}, {"out", a.out.string()},
              {"warnings", json::array({kNoSendTimes})}};
}

json cmd_synth(const SynthArgs& a) {
  const Fleet fleet = synth_fleet(a.fleet);
  const auto lines = fleet_nmea(fleet, a.fleet);
  ensure_dir(a.out_dir);
  std::string text;
  for (const auto& l : lines) text += l + '\n';
  write_text_file(a.out_dir / "fleet.nmea", text);

  json inj = json::array();
  for (const auto& i : fleet.injections)
    inj.push_back(json{{"mmsi", i.mmsi}, {"index", i.index}, {"reason", expected_reason(i.kind)}});
  std::size_t messages = 0;
  for (const auto& s : fleet.streams) messages += s.messages.size();
  json summary{{"command", "synth"},
               {"vessels", fleet.streams.size()},
               {"messages", messages},
               {"lines", lines.size()},
               {"injections", inj}};
  write_text_file(a.out_dir / "injections.json", summary.dump(2) + "\n");
  return summary;
}

namespace {

void add_jobs(CLI::App* sub, int& jobs) {
  sub->add_option("--jobs,-j", jobs, "Worker threads (default: hardware threads)")->check(CLI::PositiveNumber);
}

void add_corpus(CLI::App* sub, CorpusOptions& c, std::vector<double>& bounds) {
  sub->add_option("--decoded", c.decoded_dir, "Directory of decoded dynamic day files")->required();
  sub->add_option("--static", c.static_dir, "Directory of decoded static day files");
  sub->add_option("--bounds", bounds, "lat_min,lat_max,lon_min,lon_max")->delimiter(',')->expected(4);
  sub->add_option("--sog-min", c.sog_min, "Lowest kept speed over ground, kn");
  sub->add_option("--sog-max", c.sog_max, "Highest kept speed over ground, kn");
}

std::optional<BoundingBox> to_bounds(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"AIS trajectory extraction and assessment"};
  app.set_config("--config", "", "TOML file with one [section] per subcommand")->envname("AISTRACK_CONFIG");
  app.require_subcommand(1);

  int jobs = 0;
  std::vector<double> bounds;
  std::optional<double> window_days;
  std::string baseline = "none";
  std::string format = "csv";

  DecodeArgs dec;
  auto* s_decode = app.add_subcommand("decode", "Decode raw NMEA/CSV day files");
  s_decode->add_option("--source", dec.source, "Directory of raw day files")->required();
  s_decode->add_option("--dest", dec.dest, "Output directory (dynamic/ and static/)")->required();
  add_jobs(s_decode, jobs);

  CalibrateArgs cal;
  auto* s_cal = app.add_subcommand("calibrate", "Build the length-binned quantile table");
  add_corpus(s_cal, cal.corpus, bounds);
  s_cal->add_option("--out", cal.out_table, "Quantile table file")->required();
  s_cal->add_option("--gate-p", cal.gate_p, "Quantile of the time gap used as temporal gate");
  s_cal->add_flag("--pooled-fallback", cal.pooled_fallback, "Allow calibration without ship lengths");
  s_cal->add_option("--window-days", window_days, "Training window length; 0 uses all data");
  s_cal->add_flag("--raw-cog-difference", cal.raw_cog_difference, "Turning rate without wrap-around");
  add_jobs(s_cal, jobs);

  ExtractArgs ext;
  auto* s_ext = app.add_subcommand("extract", "Split streams into trajectories");
  add_corpus(s_ext, ext.corpus, bounds);
  s_ext->add_option("--table", ext.table, "Quantile table file");
  s_ext->add_option("--alpha", ext.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  s_ext->add_option("--out", ext.out_dir, "Output directory")->required();
  s_ext->add_flag("--skip-split", ext.skip_split, "Keep each stream whole");
  s_ext->add_option("--baseline", baseline, "Use a baseline method instead")->check(CLI::IsMember({"none", "zhao", "guo"}));
  s_ext->add_option("--c-lim", ext.c_lim, "Guo turning-rate limit, deg/s");
  s_ext->add_option("--v-lim", ext.v_lim, "Guo speed limit, kn");
  s_ext->add_option("--format", format, "Trajectory file format")->check(CLI::IsMember({"csv", "geojson"}));
  add_jobs(s_ext, jobs);

  AssessArgs ass;
  auto* s_ass = app.add_subcommand("assess", "Assess and filter extracted trajectories");
  s_ass->add_option("--trajectories", ass.trajectories, "Trajectory CSV written by extract")->required();
  s_ass->add_option("--ships", ass.ships, "Ship table (default: ships.csv beside the trajectories)");
  s_ass->add_option("--out", ass.out_dir, "Output directory")->required();
  s_ass->add_option("--min-msgs", ass.min_msgs, "Reject trajectories with fewer messages");
  s_ass->add_option("--min-hull-area", ass.min_hull_area, "Reject trajectories with a smaller hull, m^2");
  s_ass->add_option("--heatmap", ass.heatmap, "Write an N x N density grid");
  s_ass->add_option("--bounds", bounds, "Heatmap frame lat_min,lat_max,lon_min,lon_max")->delimiter(',')->expected(4);
  s_ass->add_flag("--projected-turns", ass.projected_turns, "Form turn vectors in UTM meters");
  add_jobs(s_ass, jobs);

  CompareArgs cmp;
  std::optional<double> c_lim, v_lim;
  auto* s_cmp = app.add_subcommand("compare", "Compare the proposed method with both baselines");
  add_corpus(s_cmp, cmp.corpus, bounds);
  s_cmp->add_option("--table", cmp.table, "Quantile table file")->required();
  s_cmp->add_option("--alpha", cmp.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  s_cmp->add_option("--c-lim", c_lim, "Guo turning-rate limit, deg/s")->required();
  s_cmp->add_option("--v-lim", v_lim, "Guo speed limit, kn")->required();
  s_cmp->add_option("--out", cmp.out, "Comparison CSV")->required();
  add_jobs(s_cmp, jobs);

  SynthArgs syn;
  auto* s_syn = app.add_subcommand("synth", "Write a synthetic fleet as NMEA");
  s_syn->add_option("--out", syn.out_dir, "Output directory")->required();
  s_syn->add_option("--vessels", syn.fleet.vessels);
  s_syn->add_option("--messages", syn.fleet.messages);
  s_syn->add_option("--anomalies", syn.fleet.anomalies);
  s_syn->add_option("--seed", syn.fleet.seed);
  s_syn->add_option("--duplicate-rate", syn.fleet.duplicate_rate)->check(CLI::Range(0.0, 1.0));
  add_jobs(s_syn, jobs);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const int threads = jobs > 0 ? jobs : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  omp_set_num_threads(threads);

  try {
    json summary;
    if (*s_decode) {
      summary = cmd_decode(dec);
    } else if (*s_cal) {
      if (auto bb = to_bounds(bounds)) cal.corpus.bounds = *bb;
      if (s_cal->count("--window-days")) cal.window_days = window_days;
      summary = cmd_calibrate(cal);
    } else if (*s_ext) {
      if (auto bb = to_bounds(bounds)) ext.corpus.bounds = *bb;
      ext.baseline = baseline == "zhao" ? Baseline::Zhao : baseline == "guo" ? Baseline::Guo : Baseline::None;
      ext.geojson = format == "geojson";
      summary = cmd_extract(ext);
    } else if (*s_ass) {
      if (auto bb = to_bounds(bounds)) ass.bounds = *bb;
      summary = cmd_assess(ass);
    } else if (*s_cmp) {
      if (auto bb = to_bounds(bounds)) cmp.corpus.bounds = *bb;
      cmp.c_lim = *c_lim;
      cmp.v_lim = *v_lim;
      summary = cmd_compare(cmp);
    } else {
      summary = cmd_synth(syn);
    }
    if (summary.contains("warnings"))
      for (const auto& w : summary["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
    out << summary.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    err << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
  }
  return 2;
}

}  // namespace aistrack::cli
