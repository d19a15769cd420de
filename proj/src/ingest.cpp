#include "aistrack/ingest.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "aistrack/csv.hpp"
#include "aistrack/decode.hpp"
#include "aistrack/error.hpp"
#include "aistrack/nmea.hpp"

namespace aistrack {

namespace {

enum Column { kTimestamp = 0, kMessageId, kLatitude, kLongitude, kRawMessage, kMmsi, kOriginator };

void check_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, "missing header row");
  if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) line.erase(0, 3);
  std::vector<std::string> fields;
  if (!csv::split(line, fields) || fields.size() != kDayFileColumns.size() ||
      !std::equal(fields.begin(), fields.end(), kDayFileColumns.begin()))
    throw Error(ErrorCode::SchemaMismatch, "header '" + line + "'");
}

class TimestampParser {
 public:
  std::optional<double> operator()(std::string_view field) {
    if (!format_) format_ = csv::to_double(field) ? TimestampFormat::Epoch : TimestampFormat::Iso8601;
    return *format_ == TimestampFormat::Epoch ? csv::to_double(field) : csv::parse_iso8601(field);
  }

 private:
  std::optional<TimestampFormat> format_;
};

std::vector<std::string_view> split_sentences(std::string_view raw) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\n' || raw[i] == '\r')) ++i;
    if (i >= raw.size()) break;
    std::size_t j = i;
    while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\n' && raw[j] != '\r') ++j;
    out.push_back(raw.substr(i, j - i));
    i = j;
  }
  return out;
}

BitPayload payload_of(std::string_view raw) {
  const auto parts = split_sentences(raw);
  if (parts.empty()) throw Error(ErrorCode::MalformedFraming, "empty raw_message");
  if (parts.size() == 1) {
    const RawSentence s = parse_sentence(split_tag_block(parts.front()).second);
    if (s.fragment_count != 1) throw Error(ErrorCode::MissingFragment, "multipart sentence without its parts");
    return dearmor(s.payload, s.fill_bits);
  }
  std::vector<RawSentence> fragments;
  fragments.reserve(parts.size());
  for (auto p : parts) fragments.push_back(parse_sentence(split_tag_block(p).second));
  return assemble(fragments);
}

template <class Row>
std::vector<Row> read_rows(std::istream& in, ReadStats& stats, auto&& convert) {
  check_header(in);
  std::vector<Row> out;
  std::vector<std::string> fields;
  std::string line;
  TimestampParser parse_time;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++stats.rows;
    if (!csv::split(line, fields) || fields.size() != kDayFileColumns.size()) {
      ++stats.skipped;
      continue;
    }
    try {
      if (auto row = convert(fields, parse_time)) {
        out.push_back(std::move(*row));
        continue;
      }
    } catch (const Error&) {
    }
    ++stats.skipped;
  }
  return out;
}

}  // namespace

std::string day_file_header() {
  std::string h;
  for (std::size_t i = 0; i < kDayFileColumns.size(); ++i) {
    if (i) h += ',';
    h += kDayFileColumns[i];
  }
  return h;
}

std::vector<AisMessage> read_dynamic_csv(std::istream& in, ReadStats& stats) {
  return read_rows<AisMessage>(
      in, stats, [](const std::vector<std::string>& f, TimestampParser& parse_time) -> std::optional<AisMessage> {
        const auto t = parse_time(f[kTimestamp]);
        const auto type = csv::to_int(f[kMessageId]);
        const auto lat = csv::to_double(f[kLatitude]);
        const auto lon = csv::to_double(f[kLongitude]);
        const auto mmsi = csv::to_int(f[kMmsi]);
        if (!t || !type || !lat || !lon || !mmsi || *mmsi < 0 || *mmsi > 0x3FFFFFFF) return std::nullopt;
        if (!is_dynamic_type(static_cast<int>(*type))) return std::nullopt;
        const AisMessage decoded = decode_dynamic(payload_of(f[kRawMessage]));
        AisMessage m;
        m.recv_time = *t;
        m.msg_type = static_cast<int>(*type);
        m.mmsi = static_cast<Mmsi>(*mmsi);
        m.lat = *lat;
        m.lon = *lon;
        m.sog = decoded.sog;
        m.cog = decoded.cog;
        m.originator = f[kOriginator];
        return m;
      });
}

std::vector<VesselStatic> read_static_csv(std::istream& in, ReadStats& stats) {
  return read_rows<VesselStatic>(
      in, stats, [](const std::vector<std::string>& f, TimestampParser& parse_time) -> std::optional<VesselStatic> {
        if (!parse_time(f[kTimestamp])) return std::nullopt;
        VesselStatic s = decode_static(payload_of(f[kRawMessage]));
        if (const auto mmsi = csv::to_int(f[kMmsi]); mmsi && static_cast<Mmsi>(*mmsi) != s.mmsi) return std::nullopt;
        return s;
      });
}

DayFileData read_day_files(std::span<const std::filesystem::path> dynamic_paths,
                           std::span<const std::filesystem::path> static_paths) {
  const std::size_t nd = dynamic_paths.size();
  const std::size_t n = nd + static_paths.size();
  std::vector<std::vector<AisMessage>> dyn(nd);
  std::vector<std::vector<VesselStatic>> sta(static_paths.size());
  std::vector<ReadStats> stats(n);
  std::vector<std::string> errors(n);
  std::vector<ErrorCode> codes(n, ErrorCode::FileUnreadable);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto& path = i < nd ? dynamic_paths[i] : static_paths[i - nd];
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      errors[i] = "cannot open " + path.string();
      continue;
    }
    try {
      if (i < nd)
        dyn[i] = read_dynamic_csv(in, stats[i]);
      else
        sta[i - nd] = read_static_csv(in, stats[i]);
    } catch (const Error& e) {
      codes[i] = e.code();
      errors[i] = path.string() + ": " + e.what();
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw Error(codes[i], errors[i]);

  DayFileData out;
  for (std::size_t i = 0; i < nd; ++i) {
    out.messages.insert(out.messages.end(), std::make_move_iterator(dyn[i].begin()),
                        std::make_move_iterator(dyn[i].end()));
    out.dynamic_stats.rows += stats[i].rows;
    out.dynamic_stats.skipped += stats[i].skipped;
  }
  for (std::size_t i = 0; i < sta.size(); ++i) {
    out.statics.insert(out.statics.end(), sta[i].begin(), sta[i].end());
    out.static_stats.rows += stats[nd + i].rows;
    out.static_stats.skipped += stats[nd + i].skipped;
  }
  return out;
}

std::vector<std::filesystem::path> list_day_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::FileUnreadable, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct ContentKey {
  Mmsi mmsi;
  int type;
  double lat, lon, sog, cog;
  bool operator==(const ContentKey&) const = default;
};

struct ContentHash {
  std::size_t operator()(const ContentKey& k) const noexcept {
    std::size_t h = std::hash<Mmsi>{}(k.mmsi) ^ (static_cast<std::size_t>(k.type) << 1);
    for (double d : {k.lat, k.lon, k.sog, k.cog}) h = h * 1000003U ^ std::hash<double>{}(d);
    return h;
  }
};

}  // namespace

std::vector<AisMessage> dedupe(std::span<const AisMessage> messages, double f_min) {
  // Visit in (time, originator) order so the surviving copy is the earliest,
  // ties going to the lexicographically smallest station.
  std::vector<std::size_t> order(messages.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (messages[a].recv_time != messages[b].recv_time) return messages[a].recv_time < messages[b].recv_time;
    return messages[a].originator < messages[b].originator;
  });

  struct Survivor {
    double time;
    const std::string* originator;
  };
  std::unordered_map<ContentKey, std::vector<Survivor>, ContentHash> recent;
  std::vector<char> keep(messages.size(), 1);
  for (std::size_t idx : order) {
    const AisMessage& m = messages[idx];
    auto& survivors = recent[ContentKey{m.mmsi, m.msg_type, m.lat, m.lon, m.sog, m.cog}];
    std::erase_if(survivors, [&](const Survivor& s) { return m.recv_time - s.time >= f_min; });
    const bool duplicate = std::any_of(survivors.begin(), survivors.end(),
                                       [&](const Survivor& s) { return *s.originator != m.originator; });
    if (duplicate)
      keep[idx] = 0;
    else
      survivors.push_back({m.recv_time, &m.originator});
  }

  std::vector<AisMessage> out;
  out.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i)
    if (keep[i]) out.push_back(messages[i]);
  return out;
}

std::vector<MessageStream> group_by_mmsi(std::span<const AisMessage> messages) {
  std::vector<std::size_t> order(messages.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (messages[a].mmsi != messages[b].mmsi) return messages[a].mmsi < messages[b].mmsi;
    return messages[a].recv_time < messages[b].recv_time;
  });
  std::vector<MessageStream> out;
  for (std::size_t idx : order) {
    if (out.empty() || out.back().mmsi != messages[idx].mmsi) out.push_back(MessageStream{messages[idx].mmsi, {}});
    out.back().messages.push_back(messages[idx]);
  }
  return out;
}

std::map<Mmsi, VesselStatic> merge_statics(std::span<const VesselStatic> statics) {
  std::map<Mmsi, VesselStatic> out;
  for (const auto& s : statics) {
    auto& merged = out[s.mmsi];
    merged.mmsi = s.mmsi;
    if (s.ship_length) merged.ship_length = s.ship_length;
    if (s.ship_type) merged.ship_type = s.ship_type;
  }
  return out;
}

}  // namespace aistrack
