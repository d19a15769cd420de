#include "aistrack/decode_batch.hpp"

#include <fstream>
#include <ostream>

#include "aistrack/csv.hpp"
#include "aistrack/decode.hpp"
#include "aistrack/error.hpp"
#include "aistrack/ingest.hpp"
#include "aistrack/nmea.hpp"

namespace aistrack {

DecodeStats& DecodeStats::operator+=(const DecodeStats& o) {
  sentences += o.sentences;
  no_timestamp += o.no_timestamp;
  malformed += o.malformed;
  checksum_errors += o.checksum_errors;
  unknown_talker += o.unknown_talker;
  fragments_discarded += o.fragments_discarded;
  fragments_pending += o.fragments_pending;
  sentences_in_messages += o.sentences_in_messages;
  messages += o.messages;
  dynamic += o.dynamic;
  static_reports += o.static_reports;
  other_types += o.other_types;
  truncated += o.truncated;
  out_of_range += o.out_of_range;
  return *this;
}

bool DecodeStats::reconciles() const noexcept {
  return sentences == no_timestamp + malformed + checksum_errors + unknown_talker + fragments_discarded +
                          fragments_pending + sentences_in_messages &&
         messages == dynamic + static_reports + other_types + truncated + out_of_range;
}

namespace {

struct Parsed {
  std::optional<RawSentence> sentence;
  std::optional<ErrorCode> error;
};

Parsed parse_one(const RawRecord& r) {
  Parsed p;
  if (!r.time) {
    p.error = ErrorCode::FileUnreadable;  // bucketed as no_timestamp
    return p;
  }
  try {
    p.sentence = parse_sentence(r.sentence);
  } catch (const Error& e) {
    p.error = e.code();
  }
  return p;
}

void count_parse_error(ErrorCode code, DecodeStats& stats) {
  switch (code) {
    case ErrorCode::FileUnreadable: ++stats.no_timestamp; break;
    case ErrorCode::ChecksumMismatch: ++stats.checksum_errors; break;
    case ErrorCode::UnknownTalker: ++stats.unknown_talker; break;
    default: ++stats.malformed; break;
  }
}

struct Assembled {
  FragmentAssembler::Completed completed;
  std::size_t record = 0;  // index of the first fragment's record
};

enum class Outcome { Dynamic, Static, OtherType, Truncated, OutOfRange };

struct Decoded {
  Outcome outcome = Outcome::OtherType;
  AisMessage message;
  VesselStatic info;
  int type = 0;
};

Decoded decode_one(const BitPayload& bits) {
  Decoded d;
  const auto type = message_type(bits);
  d.type = type.value_or(0);
  try {
    if (type && is_dynamic_type(*type)) {
      d.message = decode_dynamic(bits);
      d.outcome = Outcome::Dynamic;
    } else if (type && is_static_type(*type)) {
      d.info = decode_static(bits);
      d.outcome = Outcome::Static;
    } else {
      d.outcome = type ? Outcome::OtherType : Outcome::Truncated;
    }
  } catch (const Error& e) {
    d.outcome = e.code() == ErrorCode::OutOfRangeField ? Outcome::OutOfRange : Outcome::Truncated;
  }
  return d;
}

std::string join_fragments(const std::vector<RawSentence>& fragments) {
  std::string out;
  for (const auto& f : fragments) {
    if (!out.empty()) out += ' ';
    out += to_string(f);
  }
  return out;
}

void collect(std::span<const RawRecord> records, const std::vector<Assembled>& assembled,
             const std::vector<Decoded>& decoded, DecodeBatch& batch) {
  for (std::size_t i = 0; i < assembled.size(); ++i) {
    const auto& a = assembled[i];
    const auto& d = decoded[i];
    const RawRecord& rec = records[a.record];
    ++batch.stats.messages;
    batch.stats.sentences_in_messages += a.completed.fragments.size();
    switch (d.outcome) {
      case Outcome::Dynamic: {
        DynamicRecord out{d.message, join_fragments(a.completed.fragments)};
        out.message.recv_time = *rec.time;
        out.message.originator = rec.originator;
        batch.dynamic.push_back(std::move(out));
        ++batch.stats.dynamic;
        break;
      }
      case Outcome::Static:
        batch.statics.push_back(StaticRecord{*rec.time, d.type, d.info, rec.originator,
                                             join_fragments(a.completed.fragments)});
        ++batch.stats.static_reports;
        break;
      case Outcome::OtherType: ++batch.stats.other_types; break;
      case Outcome::Truncated: ++batch.stats.truncated; break;
      case Outcome::OutOfRange: ++batch.stats.out_of_range; break;
    }
  }
}

std::vector<Assembled> assemble_all(std::vector<Parsed>& parsed, DecodeStats& stats) {
  FragmentAssembler assembler;
  std::vector<Assembled> out;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].error) {
      count_parse_error(*parsed[i].error, stats);
      continue;
    }
    if (auto done = assembler.push(std::move(*parsed[i].sentence), i))
      out.push_back(Assembled{std::move(*done), static_cast<std::size_t>(done->tag)});
  }
  stats.fragments_discarded = assembler.discarded_fragments();
  stats.fragments_pending = assembler.pending_fragments();
  return out;
}

}  // namespace

DecodeBatch decode_records(std::span<const RawRecord> records) {
  DecodeBatch batch;
  batch.stats.sentences = records.size();
  const auto n = static_cast<std::ptrdiff_t>(records.size());

  std::vector<Parsed> parsed(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) parsed[static_cast<std::size_t>(i)] = parse_one(records[static_cast<std::size_t>(i)]);

  const std::vector<Assembled> assembled = assemble_all(parsed, batch.stats);

  std::vector<Decoded> decoded(assembled.size());
  const auto m = static_cast<std::ptrdiff_t>(assembled.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i)
    decoded[static_cast<std::size_t>(i)] = decode_one(assembled[static_cast<std::size_t>(i)].completed.payload);

  collect(records, assembled, decoded, batch);
  return batch;
}

namespace serial {

DecodeBatch decode_records(std::span<const RawRecord> records) {
  DecodeBatch batch;
  batch.stats.sentences = records.size();
  std::vector<Parsed> parsed;
  parsed.reserve(records.size());
  for (const auto& r : records) parsed.push_back(parse_one(r));
  const std::vector<Assembled> assembled = assemble_all(parsed, batch.stats);
  std::vector<Decoded> decoded;
  decoded.reserve(assembled.size());
  for (const auto& a : assembled) decoded.push_back(decode_one(a.completed.payload));
  collect(records, assembled, decoded, batch);
  return batch;
}

}  // namespace serial

std::vector<RawRecord> read_raw_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  std::vector<RawRecord> out;
  std::string line;

  if (path.extension() == ".csv") {
    if (!std::getline(in, line)) return out;
    std::vector<std::string> fields;
    if (!csv::split(line, fields) || fields.size() != kDayFileColumns.size() ||
        !std::equal(fields.begin(), fields.end(), kDayFileColumns.begin()))
      throw Error(ErrorCode::SchemaMismatch, path.string() + ": header '" + line + "'");
    std::optional<bool> epoch;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      if (!csv::split(line, fields) || fields.size() != kDayFileColumns.size()) {
        out.push_back(RawRecord{std::nullopt, {}, line});
        continue;
      }
      if (!epoch) epoch = csv::to_double(fields[0]).has_value();
      const auto t = *epoch ? csv::to_double(fields[0]) : csv::parse_iso8601(fields[0]);
      std::string_view raw = fields[4];
      bool any = false;
      while (!raw.empty()) {
        const auto start = raw.find_first_not_of(" \t");
        if (start == std::string_view::npos) break;
        raw.remove_prefix(start);
        const auto end = raw.find_first_of(" \t");
        out.push_back(RawRecord{t, fields[6], std::string(raw.substr(0, end))});
        any = true;
        if (end == std::string_view::npos) break;
        raw.remove_prefix(end);
      }
      if (!any) out.push_back(RawRecord{t, fields[6], std::string()});
    }
    return out;
  }

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    RawRecord r;
    try {
      auto [tag, sentence] = split_tag_block(line);
      r.time = tag.unix_time;
      r.originator = tag.station.value_or("");
      r.sentence = std::string(sentence);
    } catch (const Error&) {
      r.sentence = line;  // counted as malformed downstream
      r.time = 0.0;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_dynamic_csv(std::ostream& out, std::span<const DynamicRecord> records) {
  out << day_file_header() << '\n';
  for (const auto& r : records) {
    const AisMessage& m = r.message;
    out << csv::format_double(m.recv_time) << ',' << m.msg_type << ',' << csv::format_double(m.lat) << ','
        << csv::format_double(m.lon) << ',' << csv::quote(r.raw) << ',' << m.mmsi << ','
        << csv::quote(m.originator) << '\n';
  }
}

void write_static_csv(std::ostream& out, std::span<const StaticRecord> records) {
  out << day_file_header() << '\n';
  for (const auto& r : records)
    out << csv::format_double(r.time) << ',' << r.msg_type << ",,," << csv::quote(r.raw) << ',' << r.info.mmsi << ','
        << csv::quote(r.originator) << '\n';
}

}  // namespace aistrack
