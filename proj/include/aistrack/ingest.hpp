#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aistrack/types.hpp"

namespace aistrack {

/// Column order of every raw and decoded day file.
inline constexpr std::array<std::string_view, 7> kDayFileColumns = {
    "timestamp", "message_id", "latitude", "longitude", "raw_message", "MMSI", "originator"};

std::string day_file_header();

/// Messages of one MMSI ordered by reception time (stable for ties).
struct MessageStream {
  Mmsi mmsi = 0;
  std::vector<AisMessage> messages;
};

struct ReadStats {
  std::size_t rows = 0;
  std::size_t skipped = 0;  // malformed rows
};

struct DayFileData {
  std::vector<AisMessage> messages;
  std::vector<VesselStatic> statics;
  ReadStats dynamic_stats;
  ReadStats static_stats;
};

enum class TimestampFormat { Epoch, Iso8601 };

/// Parses one decoded dynamic day file. Position, type, MMSI and time come
/// from their columns; SOG and COG from the raw sentence.
/// Throws SchemaMismatch when the header differs from kDayFileColumns.
std::vector<AisMessage> read_dynamic_csv(std::istream& in, ReadStats& stats);

/// Parses one static day file; `raw_message` holds every fragment of the
/// report separated by spaces.
std::vector<VesselStatic> read_static_csv(std::istream& in, ReadStats& stats);

/// Reads all files (in parallel across files); output keeps file order.
/// Throws FileUnreadable / SchemaMismatch.
DayFileData read_day_files(std::span<const std::filesystem::path> dynamic_paths,
                           std::span<const std::filesystem::path> static_paths);

/// Sorted list of `*.csv` files directly inside `dir`.
std::vector<std::filesystem::path> list_day_files(const std::filesystem::path& dir);

/// Drops copies of one report received by different stations less than
/// `f_min` seconds apart; the earliest copy survives (ties: smallest
/// originator). `messages` must be sorted by recv_time. Output keeps input order.
std::vector<AisMessage> dedupe(std::span<const AisMessage> messages, double f_min = 2.0);

/// Stable grouping by MMSI; streams come back ordered by MMSI.
std::vector<MessageStream> group_by_mmsi(std::span<const AisMessage> messages);

/// Folds static reports per MMSI; later known values override earlier ones.
std::map<Mmsi, VesselStatic> merge_statics(std::span<const VesselStatic> statics);

}  // namespace aistrack
