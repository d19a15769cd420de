#pragma once

#include <optional>
#include <string>

#include "aistrack/nmea.hpp"
#include "aistrack/types.hpp"

namespace aistrack {

/// Message type from the first six bits, or nullopt for an empty payload.
std::optional<int> message_type(const BitPayload& bits) noexcept;

bool is_dynamic_type(int type) noexcept;  // 1, 2, 3, 18
bool is_static_type(int type) noexcept;   // 5, 24

/// Decodes a position report. `recv_time` and `originator` are left for the
/// caller. Throws TruncatedPayload for short payloads or unsupported types and
/// OutOfRangeField for coordinates/course outside their encodable range.
AisMessage decode_dynamic(const BitPayload& bits);

/// Decodes type 5 or type 24. Part A of a type 24 carries neither dimensions
/// nor ship type, so both come back unknown.
VesselStatic decode_static(const BitPayload& bits);

/// Raw field values of a position report, used to build payloads.
struct DynamicFields {
  int msg_type = 1;
  Mmsi mmsi = 0;
  int sog_tenths = 1023;        // 0.1 kn, 1023 = unavailable
  std::int64_t lon_raw = 108600000;  // 1/10000 minute, 181 deg = unavailable
  std::int64_t lat_raw = 54600000;   // 1/10000 minute, 91 deg = unavailable
  int cog_tenths = 3600;        // 0.1 deg, 3600 = unavailable
  int heading = 511;
  int second = 60;
  int nav_status = 15;
};

BitPayload encode_dynamic(const DynamicFields& f);

/// Converts physical units to the nearest encodable raw fields.
DynamicFields to_fields(const AisMessage& m);

struct StaticFields {
  Mmsi mmsi = 0;
  int ship_type = 0;
  int to_bow = 0;
  int to_stern = 0;
  int to_port = 0;
  int to_starboard = 0;
  std::string callsign;
  std::string shipname;
  std::string destination;
};

BitPayload encode_type5(const StaticFields& f);
BitPayload encode_type24b(const StaticFields& f);

}  // namespace aistrack
