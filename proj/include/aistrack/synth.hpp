#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aistrack/geo.hpp"
#include "aistrack/ingest.hpp"
#include "aistrack/quantiles.hpp"

namespace aistrack {

/// Kinds of anomaly a synthetic stream can carry. Each is a persistent
/// change, so it produces exactly one offending pair.
enum class AnomalyKind { TimeGap, DistanceJump, CourseChange, SpeedJump, SpeedGap };

/// Split reason (SplitReason bit) an anomaly of `kind` must raise.
unsigned expected_reason(AnomalyKind kind) noexcept;

struct Injection {
  Mmsi mmsi = 0;
  std::size_t index = 0;  // pair (index, index + 1) in the vessel's stream
  AnomalyKind kind = AnomalyKind::TimeGap;
};

struct FleetOptions {
  std::size_t vessels = 20;
  std::size_t messages = 10000;  // total, spread evenly
  std::size_t anomalies = 50;    // cycled through the five kinds
  double cadence = 10.0;         // s
  double start_time = 1625097600.0;  // 2021-07-01T00:00:00Z
  std::uint64_t seed = 1;
  BoundingBox area = BoundingBox::study_area();
  /// Thresholds the anomalies are sized against: each one violates exactly
  /// one of these, clean pairs none.
  SplitThresholds design{2.0, -1.0, 1.0, 600.0, 1.0, -3.0, 3.0, 0.05, CogDifference::Wrapped};
  double duplicate_rate = 0.1;  // share of reports also heard by a second station
};

struct Fleet {
  std::vector<MessageStream> streams;  // ordered by MMSI
  std::map<Mmsi, VesselStatic> statics;
  std::vector<Injection> injections;
};

/// Deterministic for a given seed. Values are quantized to the wire
/// resolution, so the fleet survives an encode/decode round trip.
/// Throws InvalidArgument when the design thresholds cannot be met.
Fleet synth_fleet(const FleetOptions& opt = {});

/// Tag-blocked NMEA lines of the fleet, time ordered: static reports first,
/// then every position report plus duplicate receptions.
std::vector<std::string> fleet_nmea(const Fleet& fleet, const FleetOptions& opt = {});

}  // namespace aistrack
