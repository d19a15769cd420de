#include "aistrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "aistrack/decode.hpp"
#include "aistrack/error.hpp"
#include "aistrack/nmea.hpp"
#include "aistrack/splitter.hpp"

namespace aistrack {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNmPerDegreeLat = 60.0;

double quantize(double v, double step) { return std::round(v / step) * step; }
double wrap360(double c) {
  c = std::fmod(c, 360.0);
  return c < 0 ? c + 360.0 : c;
}

struct Vessel {
  Mmsi mmsi;
  int msg_type;
  double length;
  int ship_type;
  std::string station;
};

// Lengths span every bin; types span the base categories.
constexpr double kLengths[] = {12, 19, 33, 48, 61, 88, 97, 110, 133, 140, 158, 166, 181, 190, 215, 260, 8, 70, 120, 300};
constexpr int kTypes[] = {30, 37, 52, 60, 70, 80, 36, 31, 69, 79, 89, 40, 35, 20, 71, 82, 99, 61, 74, 84};
const char* const kStations[] = {"DK", "SE", "DE", "NO"};

// Moves (lat, lon) by `nm` along `bearing` on a sphere.
LatLon destination(LatLon p, double bearing_deg, double nm) {
  const double delta = nm * kMetersPerNauticalMile / kEarthRadius;
  const double phi1 = p.lat * kDeg, lambda1 = p.lon * kDeg, theta = bearing_deg * kDeg;
  const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta));
  const double lambda2 = lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                                              std::cos(delta) - std::sin(phi1) * std::sin(phi2));
  return {phi2 / kDeg, lambda2 / kDeg};
}

AisMessage make_message(const Vessel& v, double t, LatLon p, double sog, double cog) {
  AisMessage m;
  m.recv_time = t;
  m.mmsi = v.mmsi;
  m.msg_type = v.msg_type;
  m.lat = std::round(p.lat * 600000.0) / 600000.0;
  m.lon = std::round(p.lon * 600000.0) / 600000.0;
  m.sog = quantize(sog, 0.1);
  m.cog = wrap360(quantize(cog, 0.1));
  if (m.cog >= 359.95) m.cog = 0.0;
  m.originator = v.station;
  return m;
}

}  // namespace

unsigned expected_reason(AnomalyKind kind) noexcept {
  switch (kind) {
    case AnomalyKind::TimeGap: return kSplitTimeGap;
    case AnomalyKind::DistanceJump: return kSplitDistance;
    case AnomalyKind::CourseChange: return kSplitTurnRate;
    case AnomalyKind::SpeedJump: return kSplitSpeedChange;
    case AnomalyKind::SpeedGap: return kSplitSpeedGap;
  }
  return kSplitNone;
}

Fleet synth_fleet(const FleetOptions& opt) {
  if (opt.vessels == 0 || opt.messages < 2 * opt.vessels)
    throw Error(ErrorCode::InvalidArgument, "need at least two messages per vessel");
  const SplitThresholds& th = opt.design;
  if (!(th.s > 0.5 && th.t > 100.0 && th.d > 0.0 && th.r_lo < 0.0 && th.r_hi > 0.0 && th.b_lo < 0.0 && th.b_hi > 0.0))
    throw Error(ErrorCode::InvalidArgument, "design thresholds out of the supported range");

  std::mt19937_64 rng(opt.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Fleet fleet;
  const std::size_t per_vessel = opt.messages / opt.vessels;
  const std::size_t spare = opt.messages % opt.vessels;

  // Anomaly kinds cycle; vessels take turns.
  std::vector<std::vector<AnomalyKind>> plan(opt.vessels);
  for (std::size_t a = 0; a < opt.anomalies; ++a)
    plan[a % opt.vessels].push_back(static_cast<AnomalyKind>(a % 5));

  const double slack = 0.3;  // margin kept from the box edge, degrees
  for (std::size_t k = 0; k < opt.vessels; ++k) {
    Vessel v;
    v.mmsi = static_cast<Mmsi>(211000000 + 1000 * k + 7);
    v.msg_type = k % 5 == 4 ? 18 : 1;
    v.length = kLengths[k % std::size(kLengths)];
    v.ship_type = kTypes[k % std::size(kTypes)];
    v.station = kStations[k % std::size(kStations)];

    const std::size_t n = per_vessel + (k < spare ? 1 : 0);
    const double cruise = quantize(uniform(5.0, 6.5), 0.1);
    const double course = quantize(uniform(0.0, 360.0), 0.1);
    LatLon base{uniform(opt.area.lat_min + slack, opt.area.lat_max - slack),
                uniform(opt.area.lon_min + slack, opt.area.lon_max - slack)};

    // Injection slots, evenly spread with jitter, never near the ends.
    std::map<std::size_t, AnomalyKind> slots;
    const auto& kinds = plan[k];
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      const double spacing = static_cast<double>(n) / static_cast<double>(kinds.size() + 1);
      const auto jitter = static_cast<std::ptrdiff_t>(uniform(-0.1, 0.1) * spacing);
      const auto idx = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(spacing * static_cast<double>(j + 1)) + jitter);
      if (idx < 2 || idx + 3 >= n) throw Error(ErrorCode::InvalidArgument, "too many anomalies for the stream length");
      slots[idx] = kinds[j];
    }
    for (auto it = slots.begin(); it != slots.end() && std::next(it) != slots.end(); ++it)
      if (std::next(it)->first - it->first < 40)
        throw Error(ErrorCode::InvalidArgument, "anomalies too dense for the stream length");

    MessageStream stream{v.mmsi, {}};
    double t = opt.start_time + static_cast<double>(k) * 3.0;
    double speed = cruise;  // base speed, decays back to cruise after a jump
    double heading = course;
    double sog = quantize(speed + uniform(-0.2, 0.2), 0.1);
    double cog = heading + uniform(-0.5, 0.5);
    auto jitter_pos = [&](LatLon p) { return destination(p, uniform(0.0, 360.0), uniform(0.0, 2.0) / kMetersPerNauticalMile); };
    stream.messages.push_back(make_message(v, t, jitter_pos(base), sog, cog));

    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto slot = slots.find(i);
      double dt = opt.cadence;
      double next_speed = speed > cruise ? std::max(cruise, speed - 0.1) : cruise;
      double next_heading = heading;
      double extra_nm = 0.0;     // displacement beyond the reported-speed track
      std::optional<double> est;  // forced positional speed for the pair
      if (slot != slots.end()) {
        fleet.injections.push_back({v.mmsi, i, slot->second});
        switch (slot->second) {
          case AnomalyKind::TimeGap:
            dt = std::round(th.t + 50.0);
            est = speed - th.b_hi / 2.0;
            break;
          case AnomalyKind::DistanceJump:
            dt = std::round(th.t * 0.9);
            est = speed - th.b_lo * 2.0 / 3.0;
            break;
          case AnomalyKind::CourseChange:
            next_heading = heading + 3.0 * std::max(-th.r_lo, th.r_hi) * dt;
            break;
          case AnomalyKind::SpeedJump:
            next_speed = speed + quantize(th.s + 1.0, 0.1);
            break;
          case AnomalyKind::SpeedGap:
            extra_nm = 2.0 * std::max(-th.b_lo, th.b_hi) * dt / kSecondsPerHour;
            break;
        }
      }
      const double next_sog = quantize(next_speed + uniform(-0.2, 0.2), 0.1);
      const double next_cog = next_heading + uniform(-0.5, 0.5);
      const double leg_speed = est.value_or((speed + next_speed) / 2.0);
      const double leg_nm = leg_speed * dt / kSecondsPerHour + extra_nm;
      base = destination(base, (heading + next_heading) / 2.0, leg_nm);
      t += dt;
      speed = next_speed;
      heading = next_heading;
      stream.messages.push_back(make_message(v, t, jitter_pos(base), next_sog, next_cog));
    }

    // Every designed pair must raise exactly its own condition and every
    // other pair none.
    for (std::size_t i = 0; i + 1 < stream.messages.size(); ++i) {
      const auto slot = slots.find(i);
      const unsigned want = slot == slots.end() ? kSplitNone : expected_reason(slot->second);
      if (split_reasons(stream.messages[i], stream.messages[i + 1], th) != want)
        throw Error(ErrorCode::InvalidArgument, "design thresholds not met for vessel " + std::to_string(v.mmsi) +
                                                    " pair " + std::to_string(i));
    }

    fleet.statics[v.mmsi] = VesselStatic{v.mmsi, v.length, v.ship_type};
    fleet.streams.push_back(std::move(stream));
  }
  std::sort(fleet.streams.begin(), fleet.streams.end(),
            [](const MessageStream& a, const MessageStream& b) { return a.mmsi < b.mmsi; });
  return fleet;
}

namespace {

std::string tagged(const std::string& sentence, double t, const std::string& station) {
  const std::string body = "c:" + std::to_string(static_cast<long long>(std::llround(t))) + ",s:" + station;
  char cs[3];
  std::snprintf(cs, sizeof cs, "%02X", static_cast<unsigned>(nmea_checksum(body)));
  return "\\" + body + "*" + cs + "\\" + sentence;
}

struct Line {
  double t;
  std::size_t order;
  std::string text;
};

}  // namespace

std::vector<std::string> fleet_nmea(const Fleet& fleet, const FleetOptions& opt) {
  std::mt19937_64 rng(opt.seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Line> lines;
  std::size_t order = 0;
  int seq = 0;

  for (const auto& stream : fleet.streams) {
    if (stream.messages.empty()) continue;
    const AisMessage& first = stream.messages.front();
    const auto st = fleet.statics.find(stream.mmsi);
    if (st != fleet.statics.end()) {
      StaticFields f;
      f.mmsi = stream.mmsi;
      f.ship_type = st->second.ship_type.value_or(0);
      const int length = static_cast<int>(std::lround(st->second.ship_length.value_or(0.0)));
      f.to_bow = length * 2 / 3;
      f.to_stern = length - f.to_bow;
      f.callsign = "SYN" + std::to_string(stream.mmsi % 1000);
      f.shipname = "VESSEL " + std::to_string(stream.mmsi % 100000);
      const BitPayload bits = first.msg_type == 18 ? encode_type24b(f) : encode_type5(f);
      const double t = first.recv_time - 1.0;
      for (const auto& s : make_sentences(bits, seq, 'A')) lines.push_back({t, order++, tagged(to_string(s), t, first.originator)});
      seq = (seq + 1) % 10;
    }
    for (const AisMessage& m : stream.messages) {
      const auto sentences = make_sentences(encode_dynamic(to_fields(m)), std::nullopt, 'B');
      for (const auto& s : sentences) lines.push_back({m.recv_time, order++, tagged(to_string(s), m.recv_time, m.originator)});
      if (u(rng) < opt.duplicate_rate) {
        const double t = m.recv_time + (u(rng) < 0.5 ? 0.0 : 1.0);
        const std::string other = m.originator == "DK" ? "SE" : "DK";
        for (const auto& s : sentences) lines.push_back({t, order++, tagged(to_string(s), t, other)});
      }
    }
  }
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.t < b.t; });
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (auto& l : lines) out.push_back(std::move(l.text));
  return out;
}

}  // namespace aistrack
