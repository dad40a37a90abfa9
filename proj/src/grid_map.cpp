#include "polynav/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>
#include <vector>

namespace polynav {

namespace {

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\r' || text[pos] == '\n')) {
      ++pos;
    }
    if (pos >= text.size()) break;
    size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' &&
           text[end] != '\r' && text[end] != '\n') {
      ++end;
    }
    tokens.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

long parse_long(std::string_view s, const char* what) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

OccupancyGrid parse_grid(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.size() < 6 || tokens[0] != "grid") {
    throw std::invalid_argument(
        "map must start with 'grid <width> <height> <resolution> <origin_x> <origin_y>'");
  }
  OccupancyGrid grid;
  grid.width = static_cast<int>(parse_long(tokens[1], "width"));
  grid.height = static_cast<int>(parse_long(tokens[2], "height"));
  grid.resolution = parse_real(tokens[3], "resolution");
  grid.origin = Vec2(parse_real(tokens[4], "origin_x"), parse_real(tokens[5], "origin_y"));
  if (grid.width <= 0 || grid.height <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (!(grid.resolution > 0.0)) {
    throw std::invalid_argument("grid resolution must be positive");
  }

  const size_t expected = static_cast<size_t>(grid.width) * grid.height;
  const size_t provided = tokens.size() - 6;
  if (provided != expected) {
    throw std::invalid_argument("cell count mismatch: header declares " +
                                std::to_string(expected) + " cells, file has " +
                                std::to_string(provided));
  }
  grid.cells.reserve(expected);
  for (size_t i = 6; i < tokens.size(); ++i) {
    const long v = parse_long(tokens[i], "cell value");
    if (v < 0 || v > 100) {
      throw std::invalid_argument("cell value out of range 0-100: " + std::to_string(v));
    }
    grid.cells.push_back(static_cast<std::uint8_t>(v));
  }
  return grid;
}

std::vector<ObstacleCluster> extract_clusters(const OccupancyGrid& grid,
                                              std::uint8_t occupied_threshold) {
  std::vector<ObstacleCluster> clusters;
  std::vector<bool> visited(grid.cells.size(), false);

  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const int idx = row * grid.width + col;
      if (visited[idx] || grid.cells[idx] < occupied_threshold) continue;

      ObstacleCluster cluster;
      std::vector<std::pair<int, int>> stack{{row, col}};
      visited[idx] = true;
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        cluster.cells.emplace_back(r, c);
        const int dr[] = {-1, 1, 0, 0};
        const int dc[] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int nr = r + dr[k];
          const int nc = c + dc[k];
          if (nr < 0 || nr >= grid.height || nc < 0 || nc >= grid.width) continue;
          const int nidx = nr * grid.width + nc;
          if (!visited[nidx] && grid.cells[nidx] >= occupied_threshold) {
            visited[nidx] = true;
            stack.emplace_back(nr, nc);
          }
        }
      }
      std::sort(cluster.cells.begin(), cluster.cells.end());
      clusters.push_back(std::move(cluster));
    }
  }
  return clusters;
}

ConvexPolygon cluster_to_polygon(const ObstacleCluster& cluster, const OccupancyGrid& grid) {
  if (cluster.cells.empty()) throw std::invalid_argument("empty cluster");
  std::vector<Vec2> corners;
  corners.reserve(cluster.cells.size() * 4);
  for (const auto& [row, col] : cluster.cells) {
    const Vec2 lo = grid.cell_corner(row, col);
    corners.push_back(lo);
    corners.emplace_back(lo.x() + grid.resolution, lo.y());
    corners.emplace_back(lo.x() + grid.resolution, lo.y() + grid.resolution);
    corners.emplace_back(lo.x(), lo.y() + grid.resolution);
  }
  return ConvexPolygon::from_ccw_vertices(convex_hull(std::move(corners)));
}

std::vector<ConvexPolygon> extract_polygons(const OccupancyGrid& grid,
                                            std::uint8_t occupied_threshold) {
  std::vector<ConvexPolygon> polys;
  for (const ObstacleCluster& cluster : extract_clusters(grid, occupied_threshold)) {
    polys.push_back(cluster_to_polygon(cluster, grid));
  }
  return polys;
}

}  // namespace polynav
