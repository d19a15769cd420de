#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aistrack/ingest.hpp"
#include "aistrack/metrics.hpp"
#include "aistrack/sketch.hpp"
#include "json.hpp"

namespace aistrack {

enum class Metric { DsogAbs, Rot, Dt, Dist, SpeedGap };
inline constexpr std::array<Metric, 5> kMetrics = {Metric::DsogAbs, Metric::Rot, Metric::Dt, Metric::Dist,
                                                   Metric::SpeedGap};

std::string_view to_string(Metric m) noexcept;

/// Ship-length bins [e0,e1), ..., [e_last, inf).
struct LengthBins {
  std::vector<double> edges{0, 25, 50, 75, 100, 125, 150, 175, 200};

  std::size_t size() const noexcept { return edges.size(); }
  /// Bin of a known length; lengths below the first edge go to bin 0.
  std::size_t index_of(double length_m) const noexcept;
  std::string label(std::size_t bin) const;
  void validate() const;

  friend bool operator==(const LengthBins&, const LengthBins&) = default;
};

/// Stored probability grid 0.005, 0.010, ..., 0.995.
inline constexpr std::size_t kGridSize = 199;
double grid_p(std::size_t i) noexcept;

/// Empirical quantile function of one metric in one bin.
struct QuantileFunction {
  std::uint64_t count = 0;
  std::vector<double> grid;  // kGridSize values, or empty when no samples
  std::optional<QuantileSketch> sketch;

  bool empty() const noexcept { return grid.empty(); }
  /// Grid value at grid points, linear interpolation between them, sketch
  /// query (or the nearest end of the grid) beyond them.
  double operator()(double p) const;

  static QuantileFunction from_sketch(QuantileSketch s);

  friend bool operator==(const QuantileFunction&, const QuantileFunction&) = default;
};

struct TrainingWindow {
  double start = 0.0;  // UNIX seconds, inclusive
  double end = 0.0;
  friend bool operator==(const TrainingWindow&, const TrainingWindow&) = default;
};

inline constexpr int kTableVersion = 1;

struct QuantileTable {
  int version = kTableVersion;
  LengthBins bins;
  // Per metric, one function per bin followed by the pooled one. Dt holds
  // only the pooled function.
  std::array<std::vector<QuantileFunction>, 5> functions;
  std::vector<std::uint64_t> messages_per_bin;  // bins + pooled
  double gate_p = 0.95;
  double gate_value = 0.0;  // seconds
  TrainingWindow window;
  CogDifference cog_mode = CogDifference::Wrapped;

  /// Empty bins fall back to the nearest non-empty bin toward larger
  /// lengths, then toward smaller, then pooled. `bin == nullopt` asks for
  /// the pooled function. Throws EmptyBin when nothing is populated.
  const QuantileFunction& lookup(Metric m, std::optional<std::size_t> bin) const;

  friend bool operator==(const QuantileTable&, const QuantileTable&) = default;
};

struct SplitThresholds {
  double s = 0.0;                // kn
  double r_lo = 0.0, r_hi = 0.0;  // deg/s
  double t = 0.0;                // s
  double d = 0.0;                // nm
  double b_lo = 0.0, b_hi = 0.0;  // kn
  double alpha = 0.05;
  CogDifference cog_mode = CogDifference::Wrapped;

  friend bool operator==(const SplitThresholds&, const SplitThresholds&) = default;
};

struct CalibrationOptions {
  LengthBins bins;
  double gate_p = 0.95;
  bool pooled_fallback = false;
  /// Only pairs inside the last `window_seconds` of the data are used;
  /// nullopt uses everything.
  std::optional<double> window_seconds = 365.0 * 86400.0;
  CogDifference cog_mode = CogDifference::Wrapped;
  std::size_t sketch_k = QuantileSketch::kDefaultK;
};

/// Partial sketches of a subset of streams; merge() is associative.
struct CalibrationShard {
  std::array<std::vector<QuantileSketch>, 5> sketches;
  std::vector<std::uint64_t> messages_per_bin;

  CalibrationShard() = default;
  CalibrationShard(std::size_t bins, std::size_t k);
  void merge(const CalibrationShard& other);
};

/// Range spanned by the streams, clipped to the configured window.
TrainingWindow training_window(std::span<const MessageStream> streams, const CalibrationOptions& opt);

/// Pooled dt quantile at `opt.gate_p` inside `window`.
double temporal_gate(std::span<const MessageStream> streams, const CalibrationOptions& opt,
                     const TrainingWindow& window);

/// Accumulates dt ungated and the other metrics for pairs with dt <= gate.
CalibrationShard accumulate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                            const CalibrationOptions& opt, double gate, const TrainingWindow& window);

QuantileTable finalize(CalibrationShard shard, const CalibrationOptions& opt, double gate,
                       const TrainingWindow& window);

/// Length-binned quantile calibration. Throws NoStaticData when no vessel
/// has a known length, unless `opt.pooled_fallback`.
QuantileTable calibrate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                        const CalibrationOptions& opt = {});

namespace serial {
QuantileTable calibrate(std::span<const MessageStream> streams, const std::map<Mmsi, VesselStatic>& statics,
                        const CalibrationOptions& opt = {});
}

/// Thresholds for a vessel of `ship_length` (pooled when unknown).
/// Throws AlphaOutOfRange unless 0 < alpha < 1.
SplitThresholds thresholds(const QuantileTable& table, std::optional<double> ship_length, double alpha);

nlohmann::json to_json(const QuantileTable& table);
QuantileTable table_from_json(const nlohmann::json& j);
void save_table(const QuantileTable& table, const std::filesystem::path& path);
/// Throws SchemaVersionMismatch for another version, FileUnreadable or
/// SchemaMismatch otherwise.
QuantileTable load_table(const std::filesystem::path& path);

}  // namespace aistrack
