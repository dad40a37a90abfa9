#include "polynav/grid_map.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace polynav;

namespace {

std::string grid_text(int w, int h, double res, double ox, double oy,
                      const std::vector<int>& cells) {
  std::string out = "grid " + std::to_string(w) + " " + std::to_string(h) + " " +
                    std::to_string(res) + " " + std::to_string(ox) + " " +
                    std::to_string(oy) + "\n";
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out += std::to_string(cells[r * w + c]);
      out += (c + 1 == w) ? '\n' : ' ';
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parsing well-formed grids") {
  const OccupancyGrid empty = parse_grid(grid_text(3, 3, 0.1, 0, 0, std::vector<int>(9, 0)));
  CHECK(empty.width == 3);
  CHECK(empty.height == 3);
  CHECK(extract_clusters(empty).empty());

  std::vector<int> cells(9, 0);
  cells[4] = 100;  // center
  const OccupancyGrid one = parse_grid(grid_text(3, 3, 0.1, 0, 0, cells));
  CHECK(one.at(1, 1) == 100);
  const auto clusters = extract_clusters(one);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].cells == std::vector<std::pair<int, int>>{{1, 1}});
}

TEST_CASE("parse errors carry the failure reason") {
  CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("grid 4 4 0.1 0 0\n0 0 0"), std::invalid_argument);
  // header declares 4x4 but only 15 cells follow
  std::string fifteen = "grid 4 4 0.1 0 0\n";
  for (int i = 0; i < 15; ++i) fifteen += "0 ";
  CHECK_THROWS_AS(parse_grid(fifteen), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("grid 1 1 0.1 0 0\nabc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("grid 1 1 0.1 0 0\n101"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("grid 1 1 0 0 0\n0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("grid 2 2 0.1 0\n"), std::invalid_argument);
}

TEST_CASE("row zero is the top of the map") {
  // 1x2 grid: the occupied top cell must map to the higher y band.
  const OccupancyGrid grid = parse_grid("grid 1 2 0.5 0 0\n100\n0\n");
  const auto clusters = extract_clusters(grid);
  REQUIRE(clusters.size() == 1);
  const ConvexPolygon poly = cluster_to_polygon(clusters[0], grid);
  CHECK(poly.contains(Vec2(0.25, 0.75)));   // top cell center
  CHECK_FALSE(poly.contains(Vec2(0.25, 0.25)));  // bottom cell center
}

TEST_CASE("diagonal cells are separate clusters, L-shaped blobs are one") {
  std::vector<int> diag(9, 0);
  diag[0] = 100;  // (0,0)
  diag[4] = 100;  // (1,1)
  CHECK(extract_clusters(parse_grid(grid_text(3, 3, 0.1, 0, 0, diag))).size() == 2);

  std::vector<int> ell(9, 0);
  ell[0] = 100;  // (0,0)
  ell[3] = 100;  // (1,0)
  ell[4] = 100;  // (1,1)
  const auto clusters = extract_clusters(parse_grid(grid_text(3, 3, 0.1, 0, 0, ell)));
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].cells.size() == 3);
}

TEST_CASE("single cell becomes its exact square") {
  const OccupancyGrid grid = parse_grid("grid 1 1 0.1 0 0\n100\n");
  const auto polys = extract_polygons(grid);
  REQUIRE(polys.size() == 1);
  REQUIRE(polys[0].vertex_count() == 4);
  CHECK((polys[0].vertices()[0] - Vec2(0.0, 0.0)).norm() < 1e-15);
  CHECK((polys[0].vertices()[1] - Vec2(0.1, 0.0)).norm() < 1e-15);
  CHECK((polys[0].vertices()[2] - Vec2(0.1, 0.1)).norm() < 1e-15);
  CHECK((polys[0].vertices()[3] - Vec2(0.0, 0.1)).norm() < 1e-15);
}

TEST_CASE("a 1x3 row of cells becomes a 0.1 x 0.3 rectangle") {
  const OccupancyGrid grid = parse_grid("grid 3 1 0.1 0 0\n100 100 100\n");
  const auto polys = extract_polygons(grid);
  REQUIRE(polys.size() == 1);
  REQUIRE(polys[0].vertex_count() == 4);  // collinear seam corners dropped
  CHECK((polys[0].vertices()[1] - Vec2(0.3, 0.0)).norm() < 1e-12);
  CHECK((polys[0].vertices()[2] - Vec2(0.3, 0.1)).norm() < 1e-12);
}

TEST_CASE("an L cluster hulls to a pentagon covering every cell center") {
  std::vector<int> ell(9, 0);
  ell[3] = 100;  // (1,0)
  ell[6] = 100;  // (2,0)
  ell[7] = 100;  // (2,1)
  const OccupancyGrid grid = parse_grid(grid_text(3, 3, 0.1, 0, 0, ell));
  const auto polys = extract_polygons(grid);
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].vertex_count() == 5);
  const auto clusters = extract_clusters(grid);
  for (const auto& [row, col] : clusters[0].cells) {
    CHECK(polys[0].contains(grid.cell_center(row, col)));
  }
}

TEST_CASE("hull minimality: every vertex is load-bearing") {
  std::vector<int> blob(16, 0);
  blob[1] = 100;
  blob[4] = 100;
  blob[5] = 100;
  blob[6] = 100;
  blob[9] = 100;
  const OccupancyGrid grid = parse_grid(grid_text(4, 4, 0.1, 0, 0, blob));
  const auto clusters = extract_clusters(grid);
  REQUIRE(clusters.size() == 1);
  const ConvexPolygon poly = cluster_to_polygon(clusters[0], grid);

  std::vector<Vec2> corners;
  for (const auto& [row, col] : clusters[0].cells) {
    const Vec2 lo = grid.cell_corner(row, col);
    corners.push_back(lo);
    corners.emplace_back(lo.x() + grid.resolution, lo.y());
    corners.emplace_back(lo.x() + grid.resolution, lo.y() + grid.resolution);
    corners.emplace_back(lo.x(), lo.y() + grid.resolution);
  }

  const auto& vs = poly.vertices();
  for (int drop = 0; drop < poly.vertex_count(); ++drop) {
    std::vector<Vec2> rest;
    for (int i = 0; i < poly.vertex_count(); ++i) {
      if (i != drop) rest.push_back(vs[i]);
    }
    const ConvexPolygon smaller = ConvexPolygon::from_ccw_vertices(rest);
    bool lost_coverage = false;
    for (const Vec2& corner : corners) {
      if (!smaller.contains(corner)) {
        lost_coverage = true;
        break;
      }
    }
    CHECK(lost_coverage);
  }
}

TEST_CASE("random grids: coverage and byte determinism") {
  std::mt19937 rng(211);
  std::uniform_int_distribution<int> dim(4, 16);
  std::uniform_int_distribution<int> value(0, 100);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    std::vector<int> cells(w * h);
    for (int& c : cells) c = value(rng) > 70 ? value(rng) : 0;
    const std::string text = grid_text(w, h, 0.1, -0.5, 0.25, cells);

    const OccupancyGrid grid = parse_grid(text);
    const auto clusters = extract_clusters(grid);
    std::string serialized_a;
    for (const auto& cluster : clusters) {
      const ConvexPolygon poly = cluster_to_polygon(cluster, grid);
      for (const auto& [row, col] : cluster.cells) {
        CHECK(poly.contains(grid.cell_center(row, col)));
      }
      serialized_a += serialize_polygon(poly);
      serialized_a += '\n';
    }

    // Re-parse and re-extract: byte-identical output.
    const OccupancyGrid grid2 = parse_grid(text);
    std::string serialized_b;
    for (const auto& cluster : extract_clusters(grid2)) {
      serialized_b += serialize_polygon(cluster_to_polygon(cluster, grid2));
      serialized_b += '\n';
    }
    CHECK(serialized_a == serialized_b);
  }
}
