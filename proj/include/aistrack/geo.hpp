#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aistrack/types.hpp"

namespace aistrack {

inline constexpr double kEarthRadius = 6371000.0;  // meters, volumetric mean

/// Great-circle distance in meters on a sphere of radius kEarthRadius.
double haversine(LatLon a, LatLon b) noexcept;

/// Closed latitude/longitude rectangle.
struct BoundingBox {
  double lat_min = -90.0;
  double lat_max = 90.0;
  double lon_min = -180.0;
  double lon_max = 180.0;

  /// North Sea / Baltic approaches box used as the default study area.
  static BoundingBox study_area() noexcept { return {51.85, 60.49, 4.85, 14.3}; }

  bool contains(LatLon p) const noexcept {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
  }
  /// Throws InvalidArgument unless lat_min < lat_max and lon_min < lon_max.
  void validate() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// False for unavailable positions.
bool in_bounds(const AisMessage& m, const BoundingBox& bb) noexcept;

struct Ellipsoid {
  double a;  // semi-major axis, meters
  double f;  // flattening
};

/// Sphere matching the haversine radius. Default datum for projection so
/// that planar and great-circle distances agree.
inline constexpr Ellipsoid kSphere{kEarthRadius, 0.0};
inline constexpr Ellipsoid kWgs84{6378137.0, 1.0 / 298.257223563};

struct UtmZone {
  int number = 31;  // 1..60
  bool north = true;
  friend bool operator==(const UtmZone&, const UtmZone&) = default;
};

struct PlanePoint {
  double easting = 0.0;
  double northing = 0.0;
  UtmZone zone;
};

/// Standard zone for `p`, including the Norway and Svalbard exceptions.
/// Throws PolarRegion for |lat| >= 84.
UtmZone utm_zone(LatLon p);

/// Transverse Mercator (Krueger series to sixth order in n), k0 = 0.9996,
/// false easting 500 km, false northing 10,000 km in the south. A given
/// `zone` is used as-is, even outside its nominal strip.
PlanePoint to_utm(LatLon p, std::optional<UtmZone> zone = std::nullopt, const Ellipsoid& datum = kSphere);

/// Projects a whole path into the zone of its first point.
std::vector<PlanePoint> to_utm(std::span<const LatLon> path, const Ellipsoid& datum = kSphere);

}  // namespace aistrack
