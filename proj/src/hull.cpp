#include "aistrack/hull.hpp"

#include <algorithm>
#include <cmath>

namespace aistrack {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Appends the hull vertices strictly left of a->b, in order from a to b.
void expand(const Point2& a, const Point2& b, std::vector<Point2>& candidates, std::vector<Point2>& out) {
  if (candidates.empty()) return;
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double d = cross(a, b, candidates[i]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  const Point2 c = candidates[far];
  std::vector<Point2> left_ac, left_cb;
  for (const Point2& p : candidates) {
    if (cross(a, c, p) > 0.0)
      left_ac.push_back(p);
    else if (cross(c, b, p) > 0.0)
      left_cb.push_back(p);
  }
  candidates.clear();
  candidates.shrink_to_fit();
  expand(a, c, left_ac, out);
  out.push_back(c);
  expand(c, b, left_cb, out);
}

}  // namespace

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  if (points.empty()) return {};
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  const Point2 a = *lo, b = *hi;
  if (a == b) return {a};
  std::vector<Point2> right, left;
  for (const Point2& p : points) {
    const double c = cross(a, b, p);
    if (c < 0.0)
      right.push_back(p);
    else if (c > 0.0)
      left.push_back(p);
  }
  // a, upper chain, b, lower chain is clockwise; reverse at the end.
  std::vector<Point2> hull{a};
  expand(a, b, left, hull);
  hull.push_back(b);
  expand(b, a, right, hull);
  std::reverse(hull.begin(), hull.end());
  return hull;
}

double polygon_area(std::span<const Point2> polygon) noexcept {
  if (polygon.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++)
    twice += polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
  return std::abs(twice) / 2.0;
}

}  // namespace aistrack
