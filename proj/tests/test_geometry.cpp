#include "polynav/geometry.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace polynav;

namespace {

ConvexPolygon unit_square() {
  return ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

}  // namespace

TEST_CASE("unit square rows match the hand-built half-spaces") {
  const ConvexPolygon square = unit_square();
  REQUIRE(square.edge_count() == 4);

  // Bottom edge (0,0)->(1,0): raw a = (dy, -dx) = (0,-1), b = 0, already
  // unit norm, i.e. the condition p_y >= 0.
  const HalfSpace& bottom = square.halfspaces()[0];
  CHECK(bottom.a.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bottom.a.y() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(bottom.b == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bottom.signed_distance(Vec2(0.5, 0.5)) > 0.0);
  CHECK(bottom.signed_distance(Vec2(0.5, -0.1)) < 0.0);

  for (const HalfSpace& row : square.halfspaces()) {
    CHECK(row.a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("triangle rows are nonnegative at the centroid") {
  const ConvexPolygon tri = ConvexPolygon::from_ccw_vertices({{0, 0}, {2, 0}, {1, 2}});
  const Vec2 centroid(1.0, 2.0 / 3.0);
  for (int r = 0; r < tri.edge_count(); ++r) {
    CHECK(tri.signed_edge_distance(r, centroid) >= 0.0);
  }
}

TEST_CASE("normalization removes positive row scaling") {
  const Vec2 raw_a(0.0, -2.0);
  const double raw_b = 0.6;
  const HalfSpace once = normalize_halfspace(raw_a, raw_b);
  const HalfSpace scaled = normalize_halfspace(5.0 * raw_a, 5.0 * raw_b);
  CHECK((once.a - scaled.a).norm() < 1e-12);
  CHECK(std::abs(once.b - scaled.b) < 1e-12);
}

TEST_CASE("normalization is idempotent under random positive rescaling") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 50; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(0, 0), 2.0);
    for (const HalfSpace& row : poly.halfspaces()) {
      const double s = scale(rng);
      const HalfSpace again = normalize_halfspace(s * row.a, s * row.b);
      CHECK((again.a - row.a).norm() < 1e-12);
      CHECK(std::abs(again.b - row.b) < 1e-12);
    }
  }
}

TEST_CASE("raw rows are orthogonal to their edges") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(1, -2), 3.0);
    const auto& vs = poly.vertices();
    const int n = poly.vertex_count();
    for (int r = 0; r < n; ++r) {
      const Vec2 edge = vs[(r + 1) % n] - vs[r];
      CHECK(std::abs(poly.halfspaces()[r].a.dot(edge)) < 1e-12);
    }
  }
}

TEST_CASE("signed edge distance equals the geometric point-line distance") {
  const ConvexPolygon square = unit_square();
  CHECK(square.signed_edge_distance(0, Vec2(0.5, 0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(square.signed_edge_distance(0, Vec2(0.7, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(square.signed_edge_distance(0, Vec2(0.5, -0.2)) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK_THROWS_AS((void)square.signed_edge_distance(4, Vec2(0, 0)), std::out_of_range);
  CHECK_THROWS_AS((void)square.signed_edge_distance(-1, Vec2(0, 0)), std::out_of_range);

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(u(rng), u(rng)), 2.5);
    const auto& vs = poly.vertices();
    const int n = poly.vertex_count();
    for (int k = 0; k < 10; ++k) {
      const Vec2 p(u(rng), u(rng));
      for (int r = 0; r < n; ++r) {
        const double expected = oracles::point_line_distance(p, vs[r], vs[(r + 1) % n]);
        CHECK(std::abs(std::abs(poly.signed_edge_distance(r, p)) - expected) < 1e-10);
      }
    }
  }
}

TEST_CASE("contains matches interior, exterior and boundary expectations") {
  const ConvexPolygon square = unit_square();
  CHECK(square.contains(Vec2(0.5, 0.5)));
  CHECK_FALSE(square.contains(Vec2(1.5, 0.5)));
  CHECK(square.contains(Vec2(1.0, 1.0)));  // vertex on the boundary
}

TEST_CASE("contains round-trips convex combinations and outward displacements") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(0, 0), 3.0);
    for (int k = 0; k < 20; ++k) {
      CHECK(poly.contains(oracles::random_interior_point(rng, poly)));
    }
    const auto& vs = poly.vertices();
    const int n = poly.vertex_count();
    for (int r = 0; r < n; ++r) {
      const Vec2 mid = 0.5 * (vs[r] + vs[(r + 1) % n]);
      const Vec2 outward = poly.halfspaces()[r].a;
      CHECK_FALSE(poly.contains(mid + 1e-6 * outward));
    }
  }
}

TEST_CASE("construction rejects bad vertex lists") {
  CHECK_THROWS_AS(ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}}), std::invalid_argument);
  // clockwise
  CHECK_THROWS_AS(ConvexPolygon::from_ccw_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}}),
                  std::invalid_argument);
  // repeated consecutive vertex
  CHECK_THROWS_AS(ConvexPolygon::from_ccw_vertices({{0, 0}, {0, 0}, {1, 1}}),
                  std::invalid_argument);
  // collinear triple
  CHECK_THROWS_AS(ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}, {2, 0}, {1, 1}}),
                  std::invalid_argument);
  // non-convex
  CHECK_THROWS_AS(
      ConvexPolygon::from_ccw_vertices({{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}}),
      std::invalid_argument);
  // non-finite
  CHECK_THROWS_AS(
      ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}, {std::nan(""), 1}}),
      std::invalid_argument);
}

TEST_CASE("canonicalize reverses clockwise rings and rejects degenerate ones") {
  const auto fixed = canonicalize_ccw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  const ConvexPolygon poly = ConvexPolygon::from_ccw_vertices(fixed);
  CHECK(poly.contains(Vec2(0.5, 0.5)));

  CHECK_THROWS_AS(canonicalize_ccw({{0, 0}, {1, 0}, {2, 0}}), std::invalid_argument);
  // bowtie: survives orientation fix-up, rejected as non-convex downstream
  CHECK_THROWS_AS(
      ConvexPolygon::from_ccw_vertices(canonicalize_ccw({{0, 0}, {1, 1}, {1, 0}, {0, 1}})),
      std::invalid_argument);
}

TEST_CASE("convex hull drops interior, duplicate and collinear points") {
  const std::vector<Vec2> pts = {{0, 0},     {0.1, 0},  {0.1, 0.1}, {0, 0.1},
                                 {0.05, 0.05},  // interior
                                 {0.1, 0.1},    // duplicate
                                 {0.05, 0}};    // collinear on the bottom edge
  const auto hull = convex_hull(pts);
  REQUIRE(hull.size() == 4);
  CHECK(hull[0] == Vec2(0, 0));
  CHECK(hull[1] == Vec2(0.1, 0));
  CHECK(hull[2] == Vec2(0.1, 0.1));
  CHECK(hull[3] == Vec2(0, 0.1));
}

TEST_CASE("signed polygon distance agrees with the brute-force oracle") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int trial = 0; trial < 25; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(0, 0), 2.0);
    for (int k = 0; k < 40; ++k) {
      const Vec2 p(u(rng), u(rng));
      const double expected = oracles::signed_polygon_distance(poly.vertices(), p);
      if (expected > 1e-9) {
        CHECK(signed_distance(poly, p) == doctest::Approx(expected).epsilon(1e-9));
      } else if (expected < -1e-9) {
        CHECK(signed_distance(poly, p) < 0.0);
      }
    }
  }
}

TEST_CASE("polygon serialization round-trips and is stable") {
  const ConvexPolygon square = unit_square();
  const std::string line = serialize_polygon(square);
  CHECK(line == "poly: 0,0 1,0 1,1 0,1");
  const ConvexPolygon back = parse_polygon(line);
  REQUIRE(back.vertex_count() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK((back.vertices()[i] - square.vertices()[i]).norm() == 0.0);
  }
  CHECK(serialize_polygon(back) == line);

  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexPolygon poly = oracles::random_hull_polygon(rng, Vec2(3, -1), 2.0);
    const ConvexPolygon again = parse_polygon(serialize_polygon(poly));
    CHECK(serialize_polygon(again) == serialize_polygon(poly));
  }

  CHECK_THROWS_AS(parse_polygon("nope"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polygon("poly: 1,2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polygon("poly: 1,x 3,4 5,6"), std::invalid_argument);
}
