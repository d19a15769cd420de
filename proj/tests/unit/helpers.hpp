#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "aistrack/ingest.hpp"
#include "aistrack/types.hpp"

namespace testutil {

inline aistrack::AisMessage msg(double t, double lat, double lon, double sog = 10.0, double cog = 90.0,
                                aistrack::Mmsi mmsi = 211000001) {
  aistrack::AisMessage m;
  m.recv_time = t;
  m.mmsi = mmsi;
  m.msg_type = 1;
  m.lat = lat;
  m.lon = lon;
  m.sog = sog;
  m.cog = cog;
  m.originator = "DK";
  return m;
}

/// Eastward track at constant speed, `dt` seconds apart, along latitude `lat`.
inline aistrack::MessageStream straight(std::size_t n, double sog = 10.0, double dt = 10.0, double lat = 55.0,
                                        aistrack::Mmsi mmsi = 211000001) {
  aistrack::MessageStream s{mmsi, {}};
  const double step_deg = sog * 1852.0 / 3600.0 * dt / (111194.93 * std::cos(lat * 3.14159265358979 / 180.0));
  for (std::size_t i = 0; i < n; ++i)
    s.messages.push_back(msg(1.6e9 + static_cast<double>(i) * dt, lat, 10.0 + static_cast<double>(i) * step_deg, sog,
                             90.0, mmsi));
  return s;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("aistrack_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace testutil
