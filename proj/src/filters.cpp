#include "aistrack/filters.hpp"

#include "aistrack/error.hpp"

namespace aistrack {

DropStats& DropStats::operator+=(const DropStats& o) noexcept {
  position_unavailable += o.position_unavailable;
  out_of_bounds += o.out_of_bounds;
  sog_unavailable += o.sog_unavailable;
  sog_below += o.sog_below;
  sog_above += o.sog_above;
  return *this;
}

nlohmann::json to_json(const DropStats& s) {
  return {{"position_unavailable", s.position_unavailable},
          {"out_of_bounds", s.out_of_bounds},
          {"sog_unavailable", s.sog_unavailable},
          {"sog_below_min", s.sog_below},
          {"sog_above_max", s.sog_above},
          {"total", s.total()}};
}

FilterResult filter_messages(std::span<const AisMessage> messages, const BoundingBox& bb, double sog_min,
                             double sog_max) {
  if (!(sog_min < sog_max)) throw Error(ErrorCode::InvalidArgument, "sog_min must be below sog_max");
  FilterResult r;
  r.kept.reserve(messages.size());
  for (const AisMessage& m : messages) {
    if (!m.position_available())
      ++r.dropped.position_unavailable;
    else if (!bb.contains(m.position()))
      ++r.dropped.out_of_bounds;
    else if (!m.sog_available())
      ++r.dropped.sog_unavailable;
    else if (m.sog < sog_min)
      ++r.dropped.sog_below;
    else if (m.sog > sog_max)
      ++r.dropped.sog_above;
    else
      r.kept.push_back(m);
  }
  return r;
}

std::vector<AisMessage> apply_preprocessor(std::span<const AisMessage> messages, const MessagePredicate& keep) {
  std::vector<AisMessage> out;
  for (const AisMessage& m : messages)
    if (keep(m)) out.push_back(m);
  return out;
}

}  // namespace aistrack
