#pragma once

#include <span>
#include <vector>

#include "aistrack/types.hpp"

namespace aistrack {

/// How two COG values are differenced.
enum class CogDifference {
  Wrapped,  // signed smallest angle in (-180, 180]
  Raw,      // cog(m2) - cog(m1), as written in the literature
};

/// Metrics of one consecutive pair. `dt == 0` marks a forced split; the
/// rate-based fields are NaN there. `rot` is NaN when either COG is
/// unavailable, `dsog` and `speed_gap` when either SOG is.
struct PairMetrics {
  double dt = 0.0;         // s
  double dsog = 0.0;       // kn, signed
  double rot = 0.0;        // deg/s
  double dist = 0.0;       // nm
  double speed_gap = 0.0;  // kn, average reported minus positional

  bool forced_split() const noexcept { return !(dt > 0.0); }
};

double avg_sog(const AisMessage& a, const AisMessage& b) noexcept;

/// Positional speed in knots. Throws ZeroTimeGap unless dt > 0.
double est_sog(const AisMessage& a, const AisMessage& b);

/// Throws ZeroTimeGap unless dt > 0.
double turning_rate(const AisMessage& a, const AisMessage& b, CogDifference mode = CogDifference::Wrapped);

/// Signed angle b - a per `mode`.
double cog_difference(double a, double b, CogDifference mode = CogDifference::Wrapped) noexcept;

PairMetrics pair_metrics(const AisMessage& a, const AisMessage& b, CogDifference mode = CogDifference::Wrapped);

/// Metrics of every consecutive pair; element i describes (m_i, m_{i+1}).
std::vector<PairMetrics> stream_metrics(std::span<const AisMessage> stream,
                                        CogDifference mode = CogDifference::Wrapped);

namespace serial {
std::vector<PairMetrics> stream_metrics(std::span<const AisMessage> stream,
                                        CogDifference mode = CogDifference::Wrapped);
}

}  // namespace aistrack
