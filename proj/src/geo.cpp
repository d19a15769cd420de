#include "aistrack/geo.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "aistrack/error.hpp"

namespace aistrack {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;

struct Series {
  double A;                     // rectifying radius
  std::array<double, 6> alpha;  // Krueger coefficients
  double e;                     // eccentricity
};

Series series_for(const Ellipsoid& el) {
  const double n = el.f / (2.0 - el.f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  Series s;
  s.A = el.a / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
  s.alpha = {
      n / 2.0 - 2.0 / 3.0 * n2 + 5.0 / 16.0 * n3 + 41.0 / 180.0 * n4 - 127.0 / 288.0 * n5 + 7891.0 / 37800.0 * n6,
      13.0 / 48.0 * n2 - 3.0 / 5.0 * n3 + 557.0 / 1440.0 * n4 + 281.0 / 630.0 * n5 - 1983433.0 / 1935360.0 * n6,
      61.0 / 240.0 * n3 - 103.0 / 140.0 * n4 + 15061.0 / 26880.0 * n5 + 167603.0 / 181440.0 * n6,
      49561.0 / 161280.0 * n4 - 179.0 / 168.0 * n5 + 6601661.0 / 7257600.0 * n6,
      34729.0 / 80640.0 * n5 - 3418889.0 / 1995840.0 * n6,
      212378941.0 / 319334400.0 * n6,
  };
  s.e = std::sqrt(el.f * (2.0 - el.f));
  return s;
}

void check_polar(LatLon p) {
  if (!(std::abs(p.lat) < 84.0)) throw Error(ErrorCode::PolarRegion, "latitude " + std::to_string(p.lat));
}

}  // namespace

double haversine(LatLon a, LatLon b) noexcept {
  const double dphi = (b.lat - a.lat) * kDeg;
  const double dlambda = (b.lon - a.lon) * kDeg;
  const double h = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
  return 2.0 * kEarthRadius * std::asin(std::sqrt(std::min(1.0, h)));
}

void BoundingBox::validate() const {
  if (!(lat_min < lat_max) || !(lon_min < lon_max))
    throw Error(ErrorCode::InvalidArgument, "bounding box must satisfy min < max");
}

bool in_bounds(const AisMessage& m, const BoundingBox& bb) noexcept {
  return m.position_available() && bb.contains(m.position());
}

UtmZone utm_zone(LatLon p) {
  check_polar(p);
  double lon = p.lon == 180.0 ? 360.0 : std::fmod(p.lon + 180.0, 360.0);
  if (lon < 0) lon += 360.0;
  int zone = static_cast<int>(lon / 6.0) + 1;
  if (zone > 60) zone = 60;
  if (p.lat >= 56.0 && p.lat < 64.0 && p.lon >= 3.0 && p.lon < 12.0) zone = 32;
  if (p.lat >= 72.0) {
    if (p.lon >= 0.0 && p.lon < 9.0) zone = 31;
    else if (p.lon >= 9.0 && p.lon < 21.0) zone = 33;
    else if (p.lon >= 21.0 && p.lon < 33.0) zone = 35;
    else if (p.lon >= 33.0 && p.lon < 42.0) zone = 37;
  }
  return {zone, p.lat >= 0.0};
}

PlanePoint to_utm(LatLon p, std::optional<UtmZone> zone, const Ellipsoid& datum) {
  check_polar(p);
  const UtmZone z = zone.value_or(utm_zone(p));
  const Series s = series_for(datum);

  const double lon0 = (z.number - 1) * 6.0 - 180.0 + 3.0;
  double dlon = std::remainder(p.lon - lon0, 360.0);
  const double phi = p.lat * kDeg;
  const double lambda = dlon * kDeg;

  // Conformal latitude via tau' = sinh(atanh(sin phi) - e atanh(e sin phi)).
  const double sp = std::sin(phi);
  const double t = std::sinh(std::atanh(sp) - (s.e > 0 ? s.e * std::atanh(s.e * sp) : 0.0));
  const double xi_p = std::atan2(t, std::cos(lambda));
  const double eta_p = std::atanh(std::sin(lambda) / std::sqrt(1.0 + t * t));

  double xi = xi_p, eta = eta_p;
  for (std::size_t j = 1; j <= s.alpha.size(); ++j) {
    const double a = s.alpha[j - 1];
    if (a == 0.0) continue;
    xi += a * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
    eta += a * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
  }

  PlanePoint out;
  out.zone = z;
  out.easting = kFalseEasting + kK0 * s.A * eta;
  out.northing = kK0 * s.A * xi + (z.north ? 0.0 : kFalseNorthingSouth);
  return out;
}

std::vector<PlanePoint> to_utm(std::span<const LatLon> path, const Ellipsoid& datum) {
  std::vector<PlanePoint> out;
  if (path.empty()) return out;
  const UtmZone z = utm_zone(path.front());
  out.reserve(path.size());
  for (const LatLon& p : path) out.push_back(to_utm(p, z, datum));
  return out;
}

}  // namespace aistrack
