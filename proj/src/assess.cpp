#include "aistrack/assess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aistrack/csv.hpp"
#include "aistrack/error.hpp"
#include "aistrack/hull.hpp"

namespace aistrack {

namespace {

std::vector<LatLon> positions(const Trajectory& t) {
  std::vector<LatLon> p;
  p.reserve(t.size());
  for (const auto& m : t.messages) p.push_back(m.position());
  return p;
}

std::vector<Point2> plane(const Trajectory& t, const Ellipsoid& datum) {
  const auto pos = positions(t);
  std::vector<Point2> out;
  out.reserve(pos.size());
  for (const PlanePoint& q : to_utm(pos, datum)) out.push_back({q.easting, q.northing});
  return out;
}

}  // namespace

double hull_area(const Trajectory& traj, const Ellipsoid& datum) {
  if (traj.size() < 3) return 0.0;
  const auto pts = plane(traj, datum);
  return polygon_area(convex_hull(pts));
}

double avg_complexity(const Trajectory& traj, TurnSpace space) {
  if (traj.size() < 3) throw Error(ErrorCode::DegenerateTrajectory, "need at least three messages");
  std::vector<Point2> pts;
  if (space == TurnSpace::Projected) {
    pts = plane(traj, kSphere);
  } else {
    for (const auto& m : traj.messages) pts.push_back({m.lon, m.lat});
  }
  std::vector<Point2> steps;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point2 d{pts[i + 1].x - pts[i].x, pts[i + 1].y - pts[i].y};
    if (d.x != 0.0 || d.y != 0.0) steps.push_back(d);
  }
  if (steps.size() < 2) throw Error(ErrorCode::DegenerateTrajectory, "fewer than two non-zero steps");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    const Point2& p = steps[i];
    const Point2& q = steps[i + 1];
    const double c = (p.x * q.x + p.y * q.y) / (std::hypot(p.x, p.y) * std::hypot(q.x, q.y));
    sum += std::clamp(c, -1.0, 1.0);
  }
  return sum / static_cast<double>(steps.size() - 1);
}

double course_change_from_complexity(double c) noexcept {
  return std::acos(std::clamp(c, -1.0, 1.0)) / std::numbers::pi * 180.0;
}

double avg_abs_course_change(const Trajectory& traj, TurnSpace space) {
  return course_change_from_complexity(avg_complexity(traj, space));
}

AssessmentReport assess(const Trajectory& traj, TurnSpace space) {
  AssessmentReport r;
  r.n_msg = traj.size();
  r.hull_area = hull_area(traj);
  if (traj.size() >= 3) {
    try {
      r.avg_complexity = avg_complexity(traj, space);
      r.avg_abs_course_change = course_change_from_complexity(*r.avg_complexity);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateTrajectory) throw;
    }
  }
  return r;
}

std::vector<AssessmentReport> assess_all(std::span<const Trajectory* const> trajs, TurnSpace space) {
  std::vector<AssessmentReport> out(trajs.size());
  std::vector<std::string> errors(trajs.size());
  std::vector<ErrorCode> codes(trajs.size(), ErrorCode::InvalidArgument);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(trajs.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = assess(*trajs[k], space);
    } catch (const Error& e) {
      codes[k] = e.code();
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty()) throw Error(codes[k], errors[k]);
  return out;
}

namespace serial {
std::vector<AssessmentReport> assess_all(std::span<const Trajectory* const> trajs, TurnSpace space) {
  std::vector<AssessmentReport> out;
  out.reserve(trajs.size());
  for (const Trajectory* t : trajs) out.push_back(assess(*t, space));
  return out;
}
}  // namespace serial

Rule too_few_messages(std::size_t n) {
  return {"too_few_messages(" + std::to_string(n) + ")", [n](const Trajectory& t) { return t.size() < n; }};
}

Rule hull_area_below(double area_m2) {
  return {"hull_area_below(" + csv::format_double(area_m2) + ")",
          [area_m2](const Trajectory& t) { return hull_area(t) < area_m2; }};
}

Inspection inspect(const ShipMap& ships, const Recipe& recipe) {
  Inspection out;
  for (const auto& [mmsi, ship] : ships) {
    for (const Trajectory& t : ship.trajectories) {
      const bool rejected = std::any_of(recipe.begin(), recipe.end(), [&](const Rule& r) { return r.reject(t); });
      ShipMap& dst = rejected ? out.rejected : out.accepted;
      auto [it, inserted] = dst.try_emplace(mmsi, TargetShip{ship.mmsi, ship.info, {}});
      it->second.trajectories.push_back(t);
    }
  }
  return out;
}

std::string base_ship_type(std::optional<int> code) {
  if (!code) return "NOTAVAILABLE";
  const int c = *code;
  if (c >= 20 && c <= 29) return "WIG";
  if (c == 30) return "FISHING";
  if (c == 31 || c == 32 || c == 52) return "TUGTOW";
  if (c == 35) return "MILITARY";
  if (c == 36) return "SAILING";
  if (c == 37) return "PLEASURE";
  if (c >= 40 && c <= 49) return "HSC";
  if (c >= 60 && c <= 69) return "PASSENGER";
  if (c >= 70 && c <= 79) return "CARGO";
  if (c >= 80 && c <= 89) return "TANKER";
  return "OTHER";
}

std::map<std::string, double> ship_type_hull_average(const ShipMap& ships, const Ellipsoid& datum) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [mmsi, ship] : ships)
    for (const Trajectory& t : ship.trajectories) {
      auto& [sum, n] = acc[base_ship_type(ship.info.ship_type)];
      sum += hull_area(t, datum);
      ++n;
    }
  std::map<std::string, double> out;
  for (const auto& [type, sn] : acc) out[type] = sn.first / static_cast<double>(sn.second);
  return out;
}

std::optional<std::size_t> axis_cell(double v, double lo, double hi, std::size_t n) noexcept {
  if (!(v >= lo && v <= hi) || n == 0) return std::nullopt;
  const auto c = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(n));
  return std::min(c, n - 1);
}

std::optional<double> PixelMap::value(std::size_t row, std::size_t col) const {
  const std::size_t i = row * cols + col;
  if (count[i] == 0) return std::nullopt;
  return sum[i] / static_cast<double>(count[i]);
}

std::size_t PixelMap::occupied() const noexcept {
  return static_cast<std::size_t>(std::count_if(count.begin(), count.end(), [](std::size_t c) { return c > 0; }));
}

PixelMap pixel_map(std::span<const AssessmentReport> reports, double n_msg_max, double area_max,
                   std::size_t resolution) {
  if (resolution == 0 || !(n_msg_max > 0.0) || !(area_max > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pixel map needs positive ranges and resolution");
  PixelMap pm;
  pm.rows = pm.cols = resolution;
  pm.n_msg_max = n_msg_max;
  pm.area_max = area_max;
  pm.sum.assign(resolution * resolution, 0.0);
  pm.count.assign(resolution * resolution, 0);
  for (const auto& r : reports) {
    if (!r.avg_abs_course_change) continue;
    const auto col = axis_cell(static_cast<double>(r.n_msg), 0.0, n_msg_max, resolution);
    const auto row = axis_cell(r.hull_area, 0.0, area_max, resolution);
    if (!col || !row) continue;
    pm.sum[*row * resolution + *col] += *r.avg_abs_course_change;
    ++pm.count[*row * resolution + *col];
  }
  return pm;
}

}  // namespace aistrack
