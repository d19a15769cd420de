#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aistrack/assess.hpp"
#include "json.hpp"

namespace aistrack {

enum class TrajectoryFormat { Csv, GeoJson };

/// Columns mmsi,traj_id,seq,timestamp,lat,lon,sog,cog; coordinates with
/// seven decimals. traj_id counts per MMSI from 0.
void write_trajectories_csv(std::ostream& out, const ShipMap& ships);
/// Inverse of write_trajectories_csv. Static data is not part of the file;
/// `source` is filled with positions in the file's order per ship.
ShipMap read_trajectories_csv(std::istream& in);

/// FeatureCollection of LineStrings ([lon, lat] order) with properties
/// mmsi, traj_id, n_msg, ship_type, length.
nlohmann::json trajectories_geojson(const ShipMap& ships);

/// Throws IoFailure.
void write_trajectories(const ShipMap& ships, const std::filesystem::path& path, TrajectoryFormat format);

/// Message counts on an npixels x npixels raster over `bb`. Row index runs
/// along latitude, column along longitude, both ascending; cells are
/// [lo, hi) except the last, which includes the max edge.
struct DensityGrid {
  BoundingBox bb;
  std::size_t npixels = 0;
  std::vector<std::uint64_t> counts;  // row-major

  std::uint64_t at(std::size_t row, std::size_t col) const { return counts[row * npixels + col]; }
  std::uint64_t total() const noexcept;
  friend bool operator==(const DensityGrid&, const DensityGrid&) = default;
};

DensityGrid density_grid(const ShipMap& ships, const BoundingBox& bb, std::size_t npixels);
namespace serial {
DensityGrid density_grid(const ShipMap& ships, const BoundingBox& bb, std::size_t npixels);
}

/// Every cell as row,col,count.
void write_grid_csv(std::ostream& out, const DensityGrid& grid);
nlohmann::json grid_manifest(const DensityGrid& grid);

/// Occupied cells as row,col,value,count.
void write_pixel_map_csv(std::ostream& out, const PixelMap& map);
nlohmann::json pixel_map_manifest(const PixelMap& map);

/// Writes `text` to `path`, throwing IoFailure on any error.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace aistrack
