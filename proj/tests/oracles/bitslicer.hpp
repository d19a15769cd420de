#pragma once

// Reference AIS field extractor: expands the armored payload into a string
// of '0'/'1' characters and slices fixed field windows out of it.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace oracle {

inline constexpr std::string_view kArmorAlphabet =
    "0123456789:;<=>?@ABCDEFGHIJKLMNOPQRSTUVW`abcdefghijklmnopqrstuvw";

inline std::string to_bits(std::string_view payload, int fill_bits) {
  std::array<int, 128> table{};
  table.fill(-1);
  for (std::size_t i = 0; i < kArmorAlphabet.size(); ++i) table[static_cast<unsigned char>(kArmorAlphabet[i])] = static_cast<int>(i);
  std::string bits;
  for (char c : payload) {
    const int v = table[static_cast<unsigned char>(c) & 0x7F];
    for (int b = 5; b >= 0; --b) bits += ((v >> b) & 1) ? '1' : '0';
  }
  bits.resize(bits.size() - static_cast<std::size_t>(fill_bits));
  return bits;
}

inline std::uint64_t u(const std::string& bits, std::size_t start, std::size_t len) {
  return std::stoull(bits.substr(start, len), nullptr, 2);
}

inline std::int64_t s(const std::string& bits, std::size_t start, std::size_t len) {
  const std::uint64_t v = u(bits, start, len);
  return bits[start] == '1' ? static_cast<std::int64_t>(v) - (std::int64_t{1} << len) : static_cast<std::int64_t>(v);
}

struct Position {
  int type;
  std::uint32_t mmsi;
  int sog_tenths;
  std::int64_t lon_raw;
  std::int64_t lat_raw;
  int cog_tenths;
};

// Field windows: types 1-3 and type 18 differ in where speed, position and
// course sit.
inline Position position(const std::string& bits) {
  Position p{};
  p.type = static_cast<int>(u(bits, 0, 6));
  p.mmsi = static_cast<std::uint32_t>(u(bits, 8, 30));
  if (p.type == 18) {
    p.sog_tenths = static_cast<int>(u(bits, 46, 10));
    p.lon_raw = s(bits, 57, 28);
    p.lat_raw = s(bits, 85, 27);
    p.cog_tenths = static_cast<int>(u(bits, 112, 12));
  } else {
    p.sog_tenths = static_cast<int>(u(bits, 50, 10));
    p.lon_raw = s(bits, 61, 28);
    p.lat_raw = s(bits, 89, 27);
    p.cog_tenths = static_cast<int>(u(bits, 116, 12));
  }
  return p;
}

struct Voyage {
  int type;
  std::uint32_t mmsi;
  int ship_type;
  int to_bow, to_stern, to_port, to_starboard;
};

inline Voyage voyage(const std::string& bits) {
  return Voyage{static_cast<int>(u(bits, 0, 6)),     static_cast<std::uint32_t>(u(bits, 8, 30)),
                static_cast<int>(u(bits, 232, 8)),   static_cast<int>(u(bits, 240, 9)),
                static_cast<int>(u(bits, 249, 9)),   static_cast<int>(u(bits, 258, 6)),
                static_cast<int>(u(bits, 264, 6))};
}

}  // namespace oracle
