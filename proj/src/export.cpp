#include "aistrack/export.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "aistrack/csv.hpp"
#include "aistrack/error.hpp"

namespace aistrack {

namespace {
constexpr int kCoordDecimals = 7;
constexpr const char* kTrajectoryHeader = "mmsi,traj_id,seq,timestamp,lat,lon,sog,cog";
}  // namespace

void write_trajectories_csv(std::ostream& out, const ShipMap& ships) {
  out << kTrajectoryHeader << '\n';
  for (const auto& [mmsi, ship] : ships)
    for (std::size_t t = 0; t < ship.trajectories.size(); ++t) {
      const auto& ms = ship.trajectories[t].messages;
      for (std::size_t i = 0; i < ms.size(); ++i)
        out << mmsi << ',' << t << ',' << i << ',' << csv::format_double(ms[i].recv_time) << ','
            << csv::format_fixed(ms[i].lat, kCoordDecimals) << ',' << csv::format_fixed(ms[i].lon, kCoordDecimals)
            << ',' << csv::format_double(ms[i].sog) << ',' << csv::format_double(ms[i].cog) << '\n';
    }
}

ShipMap read_trajectories_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || (line != kTrajectoryHeader && line != std::string(kTrajectoryHeader) + "\r"))
    throw Error(ErrorCode::SchemaMismatch, "trajectory file header");
  ShipMap ships;
  std::vector<std::string> f;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!csv::split(line, f) || f.size() != 8) throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(row));
    const auto mmsi = csv::to_int(f[0]);
    const auto traj = csv::to_int(f[1]);
    const auto seq = csv::to_int(f[2]);
    const auto t = csv::to_double(f[3]);
    const auto lat = csv::to_double(f[4]);
    const auto lon = csv::to_double(f[5]);
    const auto sog = csv::to_double(f[6]);
    const auto cog = csv::to_double(f[7]);
    if (!mmsi || !traj || !seq || !t || !lat || !lon || !sog || !cog || *mmsi < 0 || *traj < 0 || *seq < 0)
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(row));
    auto& ship = ships[static_cast<Mmsi>(*mmsi)];
    ship.mmsi = ship.info.mmsi = static_cast<Mmsi>(*mmsi);
    const auto ti = static_cast<std::size_t>(*traj);
    if (ship.trajectories.size() <= ti) ship.trajectories.resize(ti + 1);
    Trajectory& tr = ship.trajectories[ti];
    if (static_cast<std::size_t>(*seq) != tr.size())
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(row) + ": sequence out of order");
    tr.mmsi = ship.mmsi;
    AisMessage m;
    m.mmsi = ship.mmsi;
    m.recv_time = *t;
    m.lat = *lat;
    m.lon = *lon;
    m.sog = *sog;
    m.cog = *cog;
    tr.messages.push_back(std::move(m));
  }
  for (auto& [mmsi, ship] : ships) {
    std::size_t next = 0;
    for (auto& tr : ship.trajectories) {
      tr.source.resize(tr.size());
      std::iota(tr.source.begin(), tr.source.end(), next);
      next += tr.size();
    }
  }
  return ships;
}

nlohmann::json trajectories_geojson(const ShipMap& ships) {
  nlohmann::json features = nlohmann::json::array();
  auto rounded = [](double v) { return std::round(v * 1e7) / 1e7; };
  for (const auto& [mmsi, ship] : ships)
    for (std::size_t t = 0; t < ship.trajectories.size(); ++t) {
      const auto& ms = ship.trajectories[t].messages;
      nlohmann::json coords = nlohmann::json::array();
      for (const auto& m : ms) coords.push_back({rounded(m.lon), rounded(m.lat)});
      nlohmann::json props = {{"mmsi", mmsi}, {"traj_id", t}, {"n_msg", ms.size()}};
      props["ship_type"] = ship.info.ship_type ? nlohmann::json(*ship.info.ship_type) : nlohmann::json(nullptr);
      props["length"] = ship.info.ship_length ? nlohmann::json(*ship.info.ship_length) : nlohmann::json(nullptr);
      features.push_back({{"type", "Feature"},
                          {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                          {"properties", props}});
    }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void write_trajectories(const ShipMap& ships, const std::filesystem::path& path, TrajectoryFormat format) {
  std::ostringstream buf;
  if (format == TrajectoryFormat::Csv)
    write_trajectories_csv(buf, ships);
  else
    buf << trajectories_geojson(ships).dump() << '\n';
  write_text_file(path, buf.str());
}

std::uint64_t DensityGrid::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

namespace {

void check_grid_args(const BoundingBox& bb, std::size_t npixels) {
  bb.validate();
  if (npixels == 0) throw Error(ErrorCode::InvalidArgument, "npixels must be at least 1");
}

void add_ship(const TargetShip& ship, const BoundingBox& bb, std::size_t n, std::vector<std::uint64_t>& counts) {
  for (const auto& t : ship.trajectories)
    for (const auto& m : t.messages) {
      if (!in_bounds(m, bb)) continue;
      const auto row = axis_cell(m.lat, bb.lat_min, bb.lat_max, n);
      const auto col = axis_cell(m.lon, bb.lon_min, bb.lon_max, n);
      ++counts[*row * n + *col];
    }
}

}  // namespace

DensityGrid density_grid(const ShipMap& ships, const BoundingBox& bb, std::size_t npixels) {
  check_grid_args(bb, npixels);
  std::vector<const TargetShip*> list;
  list.reserve(ships.size());
  for (const auto& [mmsi, ship] : ships) list.push_back(&ship);
  DensityGrid g{bb, npixels, std::vector<std::uint64_t>(npixels * npixels, 0)};
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(npixels * npixels, 0);
#pragma omp for schedule(dynamic, 8) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(list.size()); ++i)
      add_ship(*list[static_cast<std::size_t>(i)], bb, npixels, local);
#pragma omp critical
    for (std::size_t c = 0; c < local.size(); ++c) g.counts[c] += local[c];
  }
  return g;
}

namespace serial {
DensityGrid density_grid(const ShipMap& ships, const BoundingBox& bb, std::size_t npixels) {
  check_grid_args(bb, npixels);
  DensityGrid g{bb, npixels, std::vector<std::uint64_t>(npixels * npixels, 0)};
  for (const auto& [mmsi, ship] : ships) add_ship(ship, bb, npixels, g.counts);
  return g;
}
}  // namespace serial

void write_grid_csv(std::ostream& out, const DensityGrid& grid) {
  out << "row,col,count\n";
  for (std::size_t r = 0; r < grid.npixels; ++r)
    for (std::size_t c = 0; c < grid.npixels; ++c) out << r << ',' << c << ',' << grid.at(r, c) << '\n';
}

nlohmann::json grid_manifest(const DensityGrid& grid) {
  return {{"bb",
           {{"lat_min", grid.bb.lat_min},
            {"lat_max", grid.bb.lat_max},
            {"lon_min", grid.bb.lon_min},
            {"lon_max", grid.bb.lon_max}}},
          {"npixels", grid.npixels},
          {"row_axis", "latitude"},
          {"col_axis", "longitude"},
          {"cells", "[lo,hi) with the max edge in the last cell"},
          {"total", grid.total()}};
}

void write_pixel_map_csv(std::ostream& out, const PixelMap& map) {
  out << "row,col,value,count\n";
  for (std::size_t r = 0; r < map.rows; ++r)
    for (std::size_t c = 0; c < map.cols; ++c)
      if (const auto v = map.value(r, c)) out << r << ',' << c << ',' << csv::format_double(*v) << ',' << map.count[r * map.cols + c] << '\n';
}

nlohmann::json pixel_map_manifest(const PixelMap& map) {
  return {{"rows", map.rows},
          {"cols", map.cols},
          {"row_axis", {{"quantity", "hull_area_m2"}, {"min", 0.0}, {"max", map.area_max}}},
          {"col_axis", {{"quantity", "n_msg"}, {"min", 0.0}, {"max", map.n_msg_max}}},
          {"value", "mean avg_abs_course_change_deg"},
          {"occupied", map.occupied()}};
}

}  // namespace aistrack
