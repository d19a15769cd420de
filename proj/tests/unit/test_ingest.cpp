#include <sstream>

#include "aistrack/csv.hpp"
#include "aistrack/decode.hpp"
#include "aistrack/decode_batch.hpp"
#include "aistrack/error.hpp"
#include "aistrack/ingest.hpp"
#include "aistrack/nmea.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace aistrack;
using testutil::msg;

namespace {

std::string raw_sentence(Mmsi mmsi, double lat, double lon, double sog, double cog) {
  AisMessage m = msg(0, lat, lon, sog, cog, mmsi);
  return to_string(make_sentences(encode_dynamic(to_fields(m)), std::nullopt, 'A')[0]);
}

std::string sentence_for(Mmsi mmsi, double lat, double lon, double sog, double cog) {
  return csv::quote(raw_sentence(mmsi, lat, lon, sog, cog));
}

std::string header() { return day_file_header() + "\n"; }

}  // namespace

TEST_CASE("empty file with header gives nothing") {
  std::istringstream in(header());
  ReadStats st;
  CHECK(read_dynamic_csv(in, st).empty());
  CHECK(st.rows == 0);
}

TEST_CASE("dynamic rows are read with position from columns and kinematics from the sentence") {
  std::ostringstream os;
  os << header();
  os << "1625097600,1,55.5,10.25," << sentence_for(211000001, 55.5, 10.25, 12.3, 45.6) << ",211000001,DK\n";
  os << "2021-07-01T00:00:10Z,1,55.6,10.35," << sentence_for(211000001, 55.6, 10.35, 12.4, 45.7) << ",211000001,DK\n";
  os << "1625097620,1,55.7,10.45," << sentence_for(211000002, 55.7, 10.45, 1.0, 0.0) << ",211000002,\"SE\"\n";
  std::istringstream in(os.str());
  ReadStats st;
  const auto rows = read_dynamic_csv(in, st);
  // The first row fixes the timestamp format for the file, so the ISO row is skipped.
  REQUIRE(rows.size() == 2);
  CHECK(st.rows == 3);
  CHECK(st.skipped == 1);
  CHECK(rows[0].recv_time == 1625097600.0);
  CHECK(rows[0].lat == 55.5);
  CHECK(rows[0].lon == 10.25);
  CHECK(rows[0].sog == doctest::Approx(12.3));
  CHECK(rows[0].cog == doctest::Approx(45.6));
  CHECK(rows[1].mmsi == 211000002U);
  CHECK(rows[1].originator == "SE");
}

TEST_CASE("iso timestamps are detected per file") {
  std::ostringstream os;
  os << header();
  os << "2021-07-01T00:00:10Z,1,55.6,10.35," << sentence_for(211000001, 55.6, 10.35, 12.4, 45.7) << ",211000001,DK\n";
  std::istringstream in(os.str());
  ReadStats st;
  const auto rows = read_dynamic_csv(in, st);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].recv_time == 1625097610.0);
}

TEST_CASE("a non-numeric latitude is skipped and counted") {
  std::ostringstream os;
  os << header();
  const auto s = sentence_for(211000001, 55.5, 10.25, 12.3, 45.6);
  os << "1,1,55.5,10.25," << s << ",211000001,DK\n";
  os << "2,1,north,10.25," << s << ",211000001,DK\n";
  os << "3,1,55.5,10.25," << s << ",211000001,DK\n";
  std::istringstream in(os.str());
  ReadStats st;
  CHECK(read_dynamic_csv(in, st).size() == 2);
  CHECK(st.skipped == 1);
}

TEST_CASE("wrong header is a schema mismatch") {
  std::istringstream in("time,type,lat,lon,raw,mmsi,station\n");
  ReadStats st;
  try {
    read_dynamic_csv(in, st);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaMismatch);
  }
}

TEST_CASE("static rows carry all fragments") {
  StaticFields f{219000001, 80, 150, 30, 10, 10, "OXAB", "TANKER ONE", "AARHUS"};
  const auto parts = make_sentences(encode_type5(f), 4, 'A');
  REQUIRE(parts.size() == 2);
  std::ostringstream os;
  os << header() << "1625097600,5,,,\"" << to_string(parts[0]) << ' ' << to_string(parts[1]) << "\",219000001,DK\n";
  std::istringstream in(os.str());
  ReadStats st;
  const auto s = read_static_csv(in, st);
  REQUIRE(s.size() == 1);
  CHECK(s[0].ship_length == 180.0);
  CHECK(s[0].ship_type == 80);
}

TEST_CASE("read_day_files reports unreadable paths") {
  const std::vector<std::filesystem::path> missing{"/nonexistent/2021_07_01.csv"};
  try {
    read_day_files(missing, {});
    FAIL("expected FileUnreadable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FileUnreadable);
  }
}

TEST_CASE("dedupe keeps the earliest copy inside the window") {
  auto a = msg(100.0, 55, 10, 5, 5);
  auto b = a;
  b.recv_time = 101.0;
  b.originator = "SE";
  const auto out = dedupe(std::vector<AisMessage>{a, b});
  REQUIRE(out.size() == 1);
  CHECK(out[0].recv_time == 100.0);

  b.recv_time = 103.0;
  CHECK(dedupe(std::vector<AisMessage>{a, b}).size() == 2);
}

TEST_CASE("dedupe tie goes to the smaller originator") {
  auto a = msg(100.0, 55, 10, 5, 5);
  a.originator = "SE";
  auto b = a;
  b.originator = "DK";
  const auto out = dedupe(std::vector<AisMessage>{a, b});
  REQUIRE(out.size() == 1);
  CHECK(out[0].originator == "DK");
}

TEST_CASE("dedupe leaves a single-station stream alone and is idempotent") {
  std::vector<AisMessage> v;
  for (int i = 0; i < 20; ++i) {
    auto m = msg(100.0 + i * 0.5, 55, 10, 5, 5);
    m.originator = i % 3 == 0 ? "DK" : (i % 3 == 1 ? "SE" : "NO");
    v.push_back(m);
  }
  std::vector<AisMessage> single(v.begin(), v.end());
  for (auto& m : single) m.originator = "DK";
  CHECK(dedupe(single) == single);
  const auto once = dedupe(v);
  CHECK(dedupe(once) == once);
  CHECK(once.size() < v.size());
}

TEST_CASE("group_by_mmsi orders and conserves") {
  std::vector<AisMessage> v{msg(5, 55, 10, 5, 5, 2), msg(3, 55, 10, 5, 5, 1), msg(4, 55, 10, 5, 5, 2),
                            msg(3, 55, 10, 5, 5, 2), msg(1, 55, 10, 5, 5, 1)};
  const auto streams = group_by_mmsi(v);
  REQUIRE(streams.size() == 2);
  CHECK(streams[0].mmsi == 1U);
  CHECK(streams[1].messages.size() == 3);
  CHECK(streams[1].messages[0].recv_time == 3);
  CHECK(streams[1].messages[2].recv_time == 5);
  std::size_t total = 0;
  for (const auto& s : streams) total += s.messages.size();
  CHECK(total == v.size());
  CHECK(group_by_mmsi(std::vector<AisMessage>{}).empty());
}

TEST_CASE("group_by_mmsi is stable for equal timestamps") {
  auto a = msg(3, 55, 10, 5, 5, 1);
  auto b = msg(3, 56, 11, 5, 5, 1);
  const auto s = group_by_mmsi(std::vector<AisMessage>{a, b});
  CHECK(s[0].messages[0].lat == 55);
}

TEST_CASE("merge_statics keeps later known values") {
  VesselStatic a{1, 100.0, 70};
  VesselStatic b{1, std::nullopt, 80};
  const auto m = merge_statics(std::vector<VesselStatic>{a, b});
  CHECK(m.at(1).ship_length == 100.0);
  CHECK(m.at(1).ship_type == 80);
}

TEST_CASE("raw nmea files carry tag-block timestamps and stations") {
  testutil::TempDir dir;
  const auto s = raw_sentence(211000001, 55.5, 10.25, 12.3, 45.6);
  const std::string tag = "c:1625097600,s:DK";
  char cs[3];
  std::snprintf(cs, sizeof cs, "%02X", nmea_checksum(tag));
  testutil::spit(dir / "day.nmea", "\\" + tag + "*" + cs + "\\" + s + "\n" + s + "\n\\broken" + s + "\n");
  const auto recs = read_raw_file(dir / "day.nmea");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].time == 1625097600.0);
  CHECK(recs[0].originator == "DK");
  CHECK_FALSE(recs[1].time.has_value());
  const auto batch = decode_records(recs);
  CHECK(batch.stats.no_timestamp == 1);
  CHECK(batch.stats.malformed == 1);
  CHECK(batch.stats.dynamic == 1);
  CHECK(batch.stats.reconciles());
}

TEST_CASE("list_day_files sorts and rejects non-directories") {
  testutil::TempDir dir;
  testutil::spit(dir / "2021_07_02.csv", header());
  testutil::spit(dir / "2021_07_01.csv", header());
  testutil::spit(dir / "notes.txt", "x");
  const auto files = list_day_files(dir.path());
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "2021_07_01.csv");
  CHECK_THROWS_AS(list_day_files(dir / "2021_07_01.csv"), Error);
}
