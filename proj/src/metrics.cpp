#include "aistrack/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "aistrack/error.hpp"
#include "aistrack/geo.hpp"

namespace aistrack {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMpsToKnots = kSecondsPerHour / kMetersPerNauticalMile;
}  // namespace

double avg_sog(const AisMessage& a, const AisMessage& b) noexcept { return (a.sog + b.sog) / 2.0; }

double est_sog(const AisMessage& a, const AisMessage& b) {
  const double dt = b.recv_time - a.recv_time;
  if (!(dt > 0.0)) throw Error(ErrorCode::ZeroTimeGap, "est_sog needs dt > 0");
  return haversine(a.position(), b.position()) / dt * kMpsToKnots;
}

double cog_difference(double a, double b, CogDifference mode) noexcept {
  if (mode == CogDifference::Raw) return b - a;
  double d = std::remainder(b - a, 360.0);
  if (d <= -180.0) d += 360.0;
  return d;
}

double turning_rate(const AisMessage& a, const AisMessage& b, CogDifference mode) {
  const double dt = b.recv_time - a.recv_time;
  if (!(dt > 0.0)) throw Error(ErrorCode::ZeroTimeGap, "turning_rate needs dt > 0");
  return cog_difference(a.cog, b.cog, mode) / dt;
}

PairMetrics pair_metrics(const AisMessage& a, const AisMessage& b, CogDifference mode) {
  PairMetrics p;
  p.dt = b.recv_time - a.recv_time;
  const double meters = haversine(a.position(), b.position());
  p.dist = meters / kMetersPerNauticalMile;
  const bool sogs = a.sog_available() && b.sog_available();
  p.dsog = sogs ? b.sog - a.sog : kNaN;
  if (!(p.dt > 0.0)) {
    p.rot = kNaN;
    p.speed_gap = kNaN;
    return p;
  }
  p.rot = a.cog_available() && b.cog_available() ? cog_difference(a.cog, b.cog, mode) / p.dt : kNaN;
  p.speed_gap = sogs ? avg_sog(a, b) - meters / p.dt * kMpsToKnots : kNaN;
  return p;
}

std::vector<PairMetrics> stream_metrics(std::span<const AisMessage> stream, CogDifference mode) {
  if (stream.size() < 2) return {};
  const auto n = static_cast<std::ptrdiff_t>(stream.size() - 1);
  std::vector<PairMetrics> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = pair_metrics(stream[k], stream[k + 1], mode);
  }
  return out;
}

namespace serial {

std::vector<PairMetrics> stream_metrics(std::span<const AisMessage> stream, CogDifference mode) {
  std::vector<PairMetrics> out;
  for (std::size_t i = 0; i + 1 < stream.size(); ++i) out.push_back(pair_metrics(stream[i], stream[i + 1], mode));
  return out;
}

}  // namespace serial

}  // namespace aistrack
