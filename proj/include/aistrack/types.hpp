#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace aistrack {

using Mmsi = std::uint32_t;

// Protocol "not available" encodings, in physical units.
inline constexpr double kLatUnavailable = 91.0;
inline constexpr double kLonUnavailable = 181.0;
inline constexpr double kSogUnavailable = 102.3;
inline constexpr double kCogUnavailable = 360.0;

inline constexpr double kMetersPerNauticalMile = 1852.0;
inline constexpr double kSecondsPerHour = 3600.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// One decoded dynamic position report (types 1/2/3/18).
///
/// Unavailable fields keep their wire sentinel (lat 91, lon 181, sog 102.3,
/// cog 360); use the predicates below instead of comparing by hand.
struct AisMessage {
  double recv_time = 0.0;  // UNIX seconds
  Mmsi mmsi = 0;
  int msg_type = 0;
  double lat = kLatUnavailable;
  double lon = kLonUnavailable;
  double sog = kSogUnavailable;
  double cog = kCogUnavailable;
  std::string originator;

  bool position_available() const noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && std::abs(lat) <= 90.0 &&
           std::abs(lon) <= 180.0;
  }
  // 102.2 encodes "102.2 knots or higher"; anything at or above 102.3 is the placeholder.
  bool sog_available() const noexcept { return std::isfinite(sog) && sog < kSogUnavailable - 0.05; }
  bool cog_available() const noexcept { return std::isfinite(cog) && cog >= 0.0 && cog < kCogUnavailable; }

  LatLon position() const noexcept { return {lat, lon}; }

  friend bool operator==(const AisMessage&, const AisMessage&) = default;
};

/// Static voyage data for one MMSI (types 5 and 24B).
struct VesselStatic {
  Mmsi mmsi = 0;
  std::optional<double> ship_length;  // meters, finite and < 500 when present
  std::optional<int> ship_type;       // ITU code

  friend bool operator==(const VesselStatic&, const VesselStatic&) = default;
};

inline constexpr double kMaxPlausibleShipLength = 500.0;

}  // namespace aistrack
