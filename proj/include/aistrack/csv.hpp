#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aistrack::csv {

/// Splits one RFC 4180 record (no embedded newlines). Returns false on an
/// unterminated quote.
bool split(std::string_view line, std::vector<std::string>& out);

/// Quotes `field` when it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

std::optional<double> to_double(std::string_view s);
std::optional<long long> to_int(std::string_view s);

/// Shortest representation that round-trips.
std::string format_double(double v);
/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// ISO-8601 UTC ("2021-03-04T05:06:07Z", optional fraction, 'T' or ' ')
/// to UNIX seconds.
std::optional<double> parse_iso8601(std::string_view s);

}  // namespace aistrack::csv
