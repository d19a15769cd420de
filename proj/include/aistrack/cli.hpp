#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aistrack/filters.hpp"
#include "aistrack/geo.hpp"
#include "aistrack/synth.hpp"
#include "json.hpp"

namespace aistrack::cli {

namespace fs = std::filesystem;

/// Message-level filtering shared by the corpus-reading commands.
struct CorpusOptions {
  fs::path decoded_dir;
  std::optional<fs::path> static_dir;
  BoundingBox bounds = BoundingBox::study_area();
  double sog_min = 1.0;
  double sog_max = 30.0;
  double f_min = 2.0;  // duplicate window, seconds
};

struct DecodeArgs {
  fs::path source;
  fs::path dest;
};

struct CalibrateArgs {
  CorpusOptions corpus;
  fs::path out_table;
  double gate_p = 0.95;
  bool pooled_fallback = false;
  std::optional<double> window_days = 365.0;
  bool raw_cog_difference = false;
};

enum class Baseline { None, Zhao, Guo };

struct ExtractArgs {
  CorpusOptions corpus;
  std::optional<fs::path> table;
  double alpha = 0.05;
  fs::path out_dir;
  bool skip_split = false;
  Baseline baseline = Baseline::None;
  std::optional<double> c_lim;
  std::optional<double> v_lim;
  bool geojson = false;
};

struct AssessArgs {
  fs::path trajectories;
  std::optional<fs::path> ships;  // defaults to ships.csv next to the trajectories
  fs::path out_dir;
  std::optional<std::size_t> min_msgs;
  std::optional<double> min_hull_area;
  std::optional<std::size_t> heatmap;
  BoundingBox bounds = BoundingBox::study_area();
  bool projected_turns = false;
};

struct CompareArgs {
  CorpusOptions corpus;
  fs::path table;
  double alpha = 0.05;
  double c_lim = 0.0;
  double v_lim = 0.0;
  fs::path out;
};

struct SynthArgs {
  fs::path out_dir;
  FleetOptions fleet;
};

// Each command returns its JSON summary and throws aistrack::Error on a
// fatal problem.
nlohmann::json cmd_decode(const DecodeArgs& a);
nlohmann::json cmd_calibrate(const CalibrateArgs& a);
nlohmann::json cmd_extract(const ExtractArgs& a);
nlohmann::json cmd_assess(const AssessArgs& a);
nlohmann::json cmd_compare(const CompareArgs& a);
nlohmann::json cmd_synth(const SynthArgs& a);

/// Parses `args` (without the program name), runs the command, prints the
/// summary to `out` and diagnostics to `err`. Returns the exit code: 0 on
/// success, 1 for usage errors, 2 for fatal runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aistrack::cli
