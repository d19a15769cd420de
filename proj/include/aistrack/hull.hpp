#pragma once

#include <span>
#include <vector>

namespace aistrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Convex hull by quickhull, counter-clockwise, without collinear points.
/// Fewer than three non-collinear points give the extreme points only.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Shoelace area of a simple polygon (absolute value).
double polygon_area(std::span<const Point2> polygon) noexcept;

}  // namespace aistrack
