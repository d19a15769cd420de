#include <cmath>
#include <numbers>
#include <random>

#include "aistrack/error.hpp"
#include "aistrack/geo.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace aistrack;

TEST_CASE("haversine matches analytic arcs") {
  const double quarter = std::numbers::pi * kEarthRadius / 2.0;
  CHECK(haversine({0, 0}, {0, 90}) == doctest::Approx(quarter).epsilon(1e-9));
  CHECK(haversine({0, 0}, {90, 0}) == doctest::Approx(quarter).epsilon(1e-9));
  CHECK(haversine({0, 0}, {0, 180}) == doctest::Approx(2 * quarter).epsilon(1e-9));
  CHECK(haversine({90, 0}, {-90, 0}) == doctest::Approx(2 * quarter).epsilon(1e-9));
  CHECK(haversine({55, 10}, {55, 10}) == 0.0);
}

TEST_CASE("haversine is symmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-89, 89), lon(-180, 180);
  for (int i = 0; i < 200; ++i) {
    LatLon a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    CHECK(haversine(a, b) == doctest::Approx(haversine(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("bounding box is closed and validates") {
  const auto bb = BoundingBox::study_area();
  CHECK(bb.contains({51.85, 4.85}));
  CHECK(bb.contains({60.49, 14.3}));
  CHECK_FALSE(bb.contains({51.84, 5.0}));
  CHECK_THROWS_AS((BoundingBox{1, 0, 0, 1}.validate()), Error);
  auto m = testutil::msg(0, 91, 181);
  CHECK_FALSE(in_bounds(m, BoundingBox{}));
}

TEST_CASE("utm zones including the Norway and Svalbard exceptions") {
  CHECK(utm_zone({55.0, 10.0}) == UtmZone{32, true});
  CHECK(utm_zone({52.0, 4.9}) == UtmZone{31, true});
  CHECK(utm_zone({60.0, 5.0}) == UtmZone{32, true});
  CHECK(utm_zone({55.0, 5.0}) == UtmZone{31, true});
  CHECK(utm_zone({78.0, 8.0}) == UtmZone{31, true});
  CHECK(utm_zone({78.0, 15.0}) == UtmZone{33, true});
  CHECK(utm_zone({78.0, 25.0}) == UtmZone{35, true});
  CHECK(utm_zone({78.0, 35.0}) == UtmZone{37, true});
  CHECK(utm_zone({-33.9, 18.4}) == UtmZone{34, false});
  CHECK(utm_zone({0.5, -179.5}) == UtmZone{1, true});
  CHECK(utm_zone({0.5, 180.0}) == UtmZone{60, true});
}

TEST_CASE("polar positions are rejected") {
  try {
    utm_zone({84.5, 0.0});
    FAIL("expected PolarRegion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PolarRegion);
  }
  CHECK_THROWS_AS(to_utm(LatLon{-85.0, 10.0}), Error);
}

TEST_CASE("WGS84 projection matches an established implementation") {
  struct Case {
    double lat, lon;
    int zone;
    bool north;
    double e, n;
  };
  // Reference eastings/northings from PROJ.
  const Case cases[] = {
      {55.0, 10.0, 32, true, 563967.4231, 6095248.7082},   {60.0, 5.0, 32, true, 276979.9264, 6658157.2024},
      {78.0, 15.0, 33, true, 500000.0000, 8658369.5858},   {-33.9, 18.4, 34, false, 259583.2217, 6245888.0454},
      {52.0, 4.9, 31, true, 630430.2708, 5762742.6527},    {0.5, -179.5, 1, true, 221734.2217, 55318.0400},
      {83.9, -75.3, 18, true, 496440.8585, 9316939.4191},  {57.3, 12.0, 33, true, 319259.7088, 6354764.6048},
  };
  for (const auto& c : cases) {
    CAPTURE(c.lat);
    CAPTURE(c.lon);
    const PlanePoint p = to_utm(LatLon{c.lat, c.lon}, UtmZone{c.zone, c.north}, kWgs84);
    CHECK(std::abs(p.easting - c.e) < 1e-3);
    CHECK(std::abs(p.northing - c.n) < 1e-3);
  }
}

TEST_CASE("local planar distances match haversine within 0.1 percent") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(-70, 70), zone_off(1.0, 5.0), bearing(0, 2 * std::numbers::pi),
      dist(100.0, 50000.0);
  std::uniform_int_distribution<int> zone(1, 60);
  for (int i = 0; i < 2000; ++i) {
    const double lon0 = -180.0 + 6.0 * (zone(rng) - 1) + zone_off(rng);
    const LatLon a{lat(rng), lon0};
    const double d = dist(rng), th = bearing(rng);
    const double dlat = d * std::cos(th) / kEarthRadius * 180.0 / std::numbers::pi;
    const double dlon = d * std::sin(th) / (kEarthRadius * std::cos(a.lat * std::numbers::pi / 180.0)) * 180.0 / std::numbers::pi;
    const LatLon b{a.lat + dlat, a.lon + dlon};
    if (utm_zone(a) != utm_zone(b)) continue;
    const std::vector<LatLon> path{a, b};
    const auto pp = to_utm(path);
    const double planar = std::hypot(pp[1].easting - pp[0].easting, pp[1].northing - pp[0].northing);
    const double great = haversine(a, b);
    CHECK(std::abs(planar - great) / great < 1e-3);
  }
}

TEST_CASE("a path is projected in the zone of its first point") {
  const std::vector<LatLon> path{{55.0, 11.9}, {55.0, 12.1}};
  const auto pp = to_utm(path);
  CHECK(pp[0].zone == pp[1].zone);
  CHECK(pp[1].zone.number == 32);
  CHECK(pp[1].easting > pp[0].easting);
}
