#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aistrack/geo.hpp"
#include "aistrack/splitter.hpp"

namespace aistrack {

/// Convex hull area of the trajectory's projected positions, m^2. All
/// points use the zone of the first one. Fewer than three points give 0.
double hull_area(const Trajectory& traj, const Ellipsoid& datum = kSphere);

/// Space in which turn vectors are formed.
enum class TurnSpace {
  Degrees,    // raw lat/lon differences
  Projected,  // UTM meters
};

/// Mean cosine between consecutive non-zero step vectors. Repeated
/// positions are skipped. Throws DegenerateTrajectory with fewer than three
/// messages or fewer than two non-zero steps.
double avg_complexity(const Trajectory& traj, TurnSpace space = TurnSpace::Degrees);

/// arccos(c) in degrees, c clamped to [-1, 1].
double course_change_from_complexity(double c) noexcept;

double avg_abs_course_change(const Trajectory& traj, TurnSpace space = TurnSpace::Degrees);

struct AssessmentReport {
  std::size_t n_msg = 0;
  double hull_area = 0.0;                       // m^2
  std::optional<double> avg_complexity;         // undefined for n_msg < 3 or no turns
  std::optional<double> avg_abs_course_change;  // degrees

  friend bool operator==(const AssessmentReport&, const AssessmentReport&) = default;
};

AssessmentReport assess(const Trajectory& traj, TurnSpace space = TurnSpace::Degrees);

std::vector<AssessmentReport> assess_all(std::span<const Trajectory* const> trajs,
                                         TurnSpace space = TurnSpace::Degrees);
namespace serial {
std::vector<AssessmentReport> assess_all(std::span<const Trajectory* const> trajs,
                                         TurnSpace space = TurnSpace::Degrees);
}

/// Named predicate; true rejects the trajectory.
struct Rule {
  std::string name;
  std::function<bool(const Trajectory&)> reject;
};
using Recipe = std::vector<Rule>;

Rule too_few_messages(std::size_t n);
Rule hull_area_below(double area_m2);

using ShipMap = std::map<Mmsi, TargetShip>;

struct Inspection {
  ShipMap accepted;
  ShipMap rejected;
};

/// Partitions trajectories; a ship appears in a map only with at least one
/// trajectory there.
Inspection inspect(const ShipMap& ships, const Recipe& recipe);

/// Coarse ITU category name, e.g. 84 -> "TANKER"; nullopt -> "NOTAVAILABLE".
std::string base_ship_type(std::optional<int> code);

/// Mean hull area per base ship type over every trajectory in `ships`.
std::map<std::string, double> ship_type_hull_average(const ShipMap& ships, const Ellipsoid& datum = kSphere);

/// Mean course change per (hull area, n_msg) cell. Columns run along
/// n_msg, rows along hull area; cells are [lo, hi) except the last.
struct PixelMap {
  std::size_t rows = 100, cols = 100;
  double n_msg_max = 100.0;
  double area_max = 5e4;
  std::vector<double> sum;
  std::vector<std::size_t> count;

  std::optional<double> value(std::size_t row, std::size_t col) const;
  std::size_t occupied() const noexcept;
};

/// Trajectories without a defined course change or outside the axis
/// ranges are left out.
PixelMap pixel_map(std::span<const AssessmentReport> reports, double n_msg_max = 100.0, double area_max = 5e4,
                   std::size_t resolution = 100);

/// Cell of `v` on [0, max] split into `n` bins, last bin closed.
std::optional<std::size_t> axis_cell(double v, double lo, double hi, std::size_t n) noexcept;

}  // namespace aistrack
