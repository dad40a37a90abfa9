#pragma once

#include "polynav/geometry.hpp"

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace polynav {

/// Row-major occupancy grid. Row 0 is the top row (largest y); `origin` is
/// the world position of the map's lower-left corner. Cell values are 0-100
/// (0 = free).
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  double resolution = 0.0;  // meters per cell
  Vec2 origin = Vec2::Zero();
  std::vector<std::uint8_t> cells;

  std::uint8_t at(int row, int col) const { return cells[row * width + col]; }

  /// World coordinates of the lower-left corner of cell (row, col).
  Vec2 cell_corner(int row, int col) const {
    return origin + Vec2(col * resolution, (height - 1 - row) * resolution);
  }
  Vec2 cell_center(int row, int col) const {
    return cell_corner(row, col) + Vec2(0.5 * resolution, 0.5 * resolution);
  }

  Vec2 world_min() const { return origin; }
  Vec2 world_max() const {
    return origin + Vec2(width * resolution, height * resolution);
  }
  bool in_bounds(const Vec2& p) const {
    return p.x() >= world_min().x() && p.x() <= world_max().x() &&
           p.y() >= world_min().y() && p.y() <= world_max().y();
  }
};

/// Text map format, line 1: "grid <width> <height> <resolution> <origin_x>
/// <origin_y>", then height rows of width integers in 0-100, row 0 first
/// (top). Throws std::invalid_argument on malformed input.
OccupancyGrid parse_grid(std::string_view text);

/// One 4-connected component of occupied cells; cells are kept in scanline
/// order, so cells.front() is the component's top-left cell.
struct ObstacleCluster {
  std::vector<std::pair<int, int>> cells;  // (row, col)
};

/// Maximal 4-connected components of cells >= occupied_threshold, ordered by
/// the scanline position of each cluster's first cell.
std::vector<ObstacleCluster> extract_clusters(const OccupancyGrid& grid,
                                              std::uint8_t occupied_threshold = 50);

/// Convex hull of the world-frame corner points of every cell in the
/// cluster; contains the whole cluster by construction.
ConvexPolygon cluster_to_polygon(const ObstacleCluster& cluster, const OccupancyGrid& grid);

/// parse -> cluster -> hull for every obstacle in the grid.
std::vector<ConvexPolygon> extract_polygons(const OccupancyGrid& grid,
                                            std::uint8_t occupied_threshold = 50);

}  // namespace polynav
