#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aistrack/types.hpp"

namespace aistrack {

/// One received sentence with its reception metadata.
struct RawRecord {
  std::optional<double> time;
  std::string originator;
  std::string sentence;
};

/// Sentence-level accounting of one decode run. Every input sentence lands
/// in exactly one bucket, so
///   sentences == no_timestamp + malformed + checksum_errors + unknown_talker
///              + fragments_discarded + fragments_pending + sentences_in_messages
/// and every assembled message lands in exactly one of
///   dynamic, static_reports, other_types, truncated, out_of_range.
struct DecodeStats {
  std::size_t sentences = 0;
  std::size_t no_timestamp = 0;
  std::size_t malformed = 0;
  std::size_t checksum_errors = 0;
  std::size_t unknown_talker = 0;
  std::size_t fragments_discarded = 0;
  std::size_t fragments_pending = 0;
  std::size_t sentences_in_messages = 0;

  std::size_t messages = 0;
  std::size_t dynamic = 0;
  std::size_t static_reports = 0;
  std::size_t other_types = 0;
  std::size_t truncated = 0;
  std::size_t out_of_range = 0;

  DecodeStats& operator+=(const DecodeStats& o);
  bool reconciles() const noexcept;
  friend bool operator==(const DecodeStats&, const DecodeStats&) = default;
};

struct DynamicRecord {
  AisMessage message;
  std::string raw;  // sentence text
};

struct StaticRecord {
  double time = 0.0;
  int msg_type = 5;
  VesselStatic info;
  std::string originator;
  std::string raw;  // fragments separated by single spaces
};

struct DecodeBatch {
  std::vector<DynamicRecord> dynamic;
  std::vector<StaticRecord> statics;
  DecodeStats stats;
};

/// Frames, assembles and decodes `records` in input order. Parsing and
/// payload decoding run in parallel; multipart assembly is a serial pass.
DecodeBatch decode_records(std::span<const RawRecord> records);

namespace serial {
DecodeBatch decode_records(std::span<const RawRecord> records);
}

/// Reads a raw day file: either a CSV with the day-file header (sentences in
/// `raw_message`, several fragments allowed per cell) or NMEA text lines with
/// optional `\c:<unix>,s:<station>*hh\` tag blocks.
std::vector<RawRecord> read_raw_file(const std::filesystem::path& path);

void write_dynamic_csv(std::ostream& out, std::span<const DynamicRecord> records);
void write_static_csv(std::ostream& out, std::span<const StaticRecord> records);

}  // namespace aistrack
