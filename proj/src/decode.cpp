#include "aistrack/decode.hpp"

#include <algorithm>
#include <cmath>

#include "aistrack/error.hpp"

namespace aistrack {

namespace {

// Field offsets per ITU-R M.1371.
struct DynamicLayout {
  std::size_t sog, lon, lat, cog, heading, second;
  std::size_t required_bits;
};

constexpr DynamicLayout kClassA{50, 61, 89, 116, 128, 137, 128};
constexpr DynamicLayout kClassB{46, 57, 85, 112, 124, 133, 124};

constexpr std::int64_t kLatRawUnavailable = 91 * 600000;
constexpr std::int64_t kLonRawUnavailable = 181 * 600000;
constexpr double kRawPerDegree = 600000.0;

// Type 5 carries dimensions up to bit 270; the rest (eta, draught,
// destination) is often cut short on the air and is not needed here.
constexpr std::size_t kType5RequiredBits = 270;
constexpr std::size_t kType24PartBBits = 162;

std::optional<double> length_from_dimensions(std::uint64_t to_bow, std::uint64_t to_stern) {
  const double length = static_cast<double>(to_bow + to_stern);
  if (to_bow == 0 && to_stern == 0) return std::nullopt;
  if (!(length < kMaxPlausibleShipLength)) return std::nullopt;
  return length;
}

std::optional<int> ship_type_code(std::uint64_t code) {
  if (code == 0) return std::nullopt;
  return static_cast<int>(code);
}

}  // namespace

std::optional<int> message_type(const BitPayload& bits) noexcept {
  if (bits.size() < 6) return std::nullopt;
  return static_cast<int>(bits.get_unsigned(0, 6));
}

bool is_dynamic_type(int type) noexcept { return type == 1 || type == 2 || type == 3 || type == 18; }
bool is_static_type(int type) noexcept { return type == 5 || type == 24; }

AisMessage decode_dynamic(const BitPayload& bits) {
  const auto type = message_type(bits);
  if (!type || !is_dynamic_type(*type))
    throw Error(ErrorCode::TruncatedPayload,
                "not a position report (type " + (type ? std::to_string(*type) : std::string("none")) + ")");
  const DynamicLayout& L = *type == 18 ? kClassB : kClassA;
  if (bits.size() < L.required_bits)
    throw Error(ErrorCode::TruncatedPayload, std::to_string(bits.size()) + " bits");

  AisMessage m;
  m.msg_type = *type;
  m.mmsi = static_cast<Mmsi>(bits.get_unsigned(8, 30));

  const std::int64_t lon_raw = bits.get_signed(L.lon, 28);
  const std::int64_t lat_raw = bits.get_signed(L.lat, 27);
  if (lon_raw != kLonRawUnavailable && std::abs(lon_raw) > 180 * 600000)
    throw Error(ErrorCode::OutOfRangeField, "longitude raw " + std::to_string(lon_raw));
  if (lat_raw != kLatRawUnavailable && std::abs(lat_raw) > 90 * 600000)
    throw Error(ErrorCode::OutOfRangeField, "latitude raw " + std::to_string(lat_raw));
  m.lon = static_cast<double>(lon_raw) / kRawPerDegree;
  m.lat = static_cast<double>(lat_raw) / kRawPerDegree;

  // Every 10-bit speed is meaningful; 1023 is the unavailable marker.
  m.sog = static_cast<double>(bits.get_unsigned(L.sog, 10)) / 10.0;

  const auto cog_raw = bits.get_unsigned(L.cog, 12);
  if (cog_raw > 3600) throw Error(ErrorCode::OutOfRangeField, "course raw " + std::to_string(cog_raw));
  m.cog = static_cast<double>(cog_raw) / 10.0;
  return m;
}

VesselStatic decode_static(const BitPayload& bits) {
  const auto type = message_type(bits);
  if (!type || !is_static_type(*type))
    throw Error(ErrorCode::TruncatedPayload,
                "not a static report (type " + (type ? std::to_string(*type) : std::string("none")) + ")");
  if (bits.size() < 40) throw Error(ErrorCode::TruncatedPayload, std::to_string(bits.size()) + " bits");

  VesselStatic s;
  s.mmsi = static_cast<Mmsi>(bits.get_unsigned(8, 30));
  if (*type == 5) {
    if (bits.size() < kType5RequiredBits) throw Error(ErrorCode::TruncatedPayload, std::to_string(bits.size()) + " bits");
    s.ship_type = ship_type_code(bits.get_unsigned(232, 8));
    s.ship_length = length_from_dimensions(bits.get_unsigned(240, 9), bits.get_unsigned(249, 9));
    return s;
  }
  const auto part = bits.get_unsigned(38, 2);
  if (part == 0) return s;  // part A: name only
  if (bits.size() < kType24PartBBits) throw Error(ErrorCode::TruncatedPayload, std::to_string(bits.size()) + " bits");
  s.ship_type = ship_type_code(bits.get_unsigned(40, 8));
  s.ship_length = length_from_dimensions(bits.get_unsigned(132, 9), bits.get_unsigned(141, 9));
  return s;
}

BitPayload encode_dynamic(const DynamicFields& f) {
  if (!is_dynamic_type(f.msg_type)) throw Error(ErrorCode::InvalidArgument, "not a position report type");
  BitPayload b(168);
  const auto u = [](std::int64_t v, unsigned width) {
    return static_cast<std::uint64_t>(v) & ((std::uint64_t{1} << width) - 1);
  };
  b.set_unsigned(0, 6, static_cast<unsigned>(f.msg_type));
  b.set_unsigned(8, 30, f.mmsi);
  if (f.msg_type == 18) {
    b.set_unsigned(46, 10, static_cast<unsigned>(f.sog_tenths));
    b.set_unsigned(57, 28, u(f.lon_raw, 28));
    b.set_unsigned(85, 27, u(f.lat_raw, 27));
    b.set_unsigned(112, 12, static_cast<unsigned>(f.cog_tenths));
    b.set_unsigned(124, 9, static_cast<unsigned>(f.heading));
    b.set_unsigned(133, 6, static_cast<unsigned>(f.second));
  } else {
    b.set_unsigned(38, 4, static_cast<unsigned>(f.nav_status));
    b.set_unsigned(42, 8, 0x80);  // rate of turn not available
    b.set_unsigned(50, 10, static_cast<unsigned>(f.sog_tenths));
    b.set_unsigned(61, 28, u(f.lon_raw, 28));
    b.set_unsigned(89, 27, u(f.lat_raw, 27));
    b.set_unsigned(116, 12, static_cast<unsigned>(f.cog_tenths));
    b.set_unsigned(128, 9, static_cast<unsigned>(f.heading));
    b.set_unsigned(137, 6, static_cast<unsigned>(f.second));
  }
  return b;
}

DynamicFields to_fields(const AisMessage& m) {
  DynamicFields f;
  f.msg_type = m.msg_type;
  f.mmsi = m.mmsi;
  f.lat_raw = std::llround(m.lat * kRawPerDegree);
  f.lon_raw = std::llround(m.lon * kRawPerDegree);
  f.sog_tenths = static_cast<int>(std::lround(std::clamp(m.sog, 0.0, 102.3) * 10.0));
  f.cog_tenths = static_cast<int>(std::lround(std::clamp(m.cog, 0.0, 360.0) * 10.0));
  if (f.cog_tenths > 3600) f.cog_tenths = 3600;
  f.heading = 511;
  f.second = static_cast<int>(std::fmod(std::floor(m.recv_time), 60.0));
  return f;
}

BitPayload encode_type5(const StaticFields& f) {
  BitPayload b(424);
  b.set_unsigned(0, 6, 5);
  b.set_unsigned(8, 30, f.mmsi);
  b.set_text(70, 42, f.callsign);
  b.set_text(112, 120, f.shipname);
  b.set_unsigned(232, 8, static_cast<unsigned>(f.ship_type));
  b.set_unsigned(240, 9, static_cast<unsigned>(f.to_bow));
  b.set_unsigned(249, 9, static_cast<unsigned>(f.to_stern));
  b.set_unsigned(258, 6, static_cast<unsigned>(f.to_port));
  b.set_unsigned(264, 6, static_cast<unsigned>(f.to_starboard));
  b.set_text(302, 120, f.destination);
  return b;
}

BitPayload encode_type24b(const StaticFields& f) {
  BitPayload b(168);
  b.set_unsigned(0, 6, 24);
  b.set_unsigned(8, 30, f.mmsi);
  b.set_unsigned(38, 2, 1);
  b.set_unsigned(40, 8, static_cast<unsigned>(f.ship_type));
  b.set_text(90, 42, f.callsign);
  b.set_unsigned(132, 9, static_cast<unsigned>(f.to_bow));
  b.set_unsigned(141, 9, static_cast<unsigned>(f.to_stern));
  b.set_unsigned(150, 6, static_cast<unsigned>(f.to_port));
  b.set_unsigned(156, 6, static_cast<unsigned>(f.to_starboard));
  return b;
}

}  // namespace aistrack
