#pragma once

#include "polynav/geometry.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace polynav {

/// Logistic membership function 1/(1+exp(-x)), evaluated branch-on-sign so it
/// stays finite and accurate for |x| well beyond 700.
double sigmoid(double x);

struct FuzzyParams {
  /// Sigmoid scaling factor c > 0 [1/m]; sets the slope of the membership
  /// transition at every (normalized) edge.
  double c = 7.0;
  /// Padded obstacle slot count. Zero is allowed and disables the
  /// constraints entirely (g == 0 everywhere).
  int max_obstacles = 3;
  /// Padded edge slot count per obstacle.
  int max_edges = 8;
  /// Occupancy threshold: positions with g < threshold are allowed. 0.25
  /// keeps polygon vertices inside the disallowed set, where two edge
  /// memberships meet at sigmoid(0)^2.
  double threshold = 0.25;

  void validate() const;  // throws std::invalid_argument
};

struct FieldEvaluation {
  double value = 0.0;       // in [0, max_obstacles]
  Vec2 gradient = Vec2::Zero();  // [1/m]
};

/// Smooth scalar field g(p) composed from all half-spaces of all loaded
/// polygons: per obstacle the edge memberships sigmoid(c*(b' - a'.p)) are
/// combined by product (AND), across obstacles by sum (OR). Slots are padded
/// to max_obstacles x max_edges; inactive obstacle slots contribute exactly 0
/// and inactive edge slots contribute exactly the neutral factor 1, so the
/// activation flags can change every cycle without changing the expression.
///
/// Treat instances as immutable after load_polygons; evaluate() is pure and
/// safe to call from multiple threads.
struct FuzzyObstacleField {
  FuzzyParams params;
  std::vector<Vec2> slot_a;             // max_obstacles * max_edges, row-major
  std::vector<double> slot_b;
  std::vector<std::uint8_t> obstacle_active;  // c_s
  std::vector<std::uint8_t> edge_active;      // d_{s,r}

  FuzzyObstacleField() { resize_slots(); }
  explicit FuzzyObstacleField(FuzzyParams p) : params(p) {
    params.validate();
    resize_slots();
  }

  int slot_index(int s, int r) const { return s * params.max_edges + r; }
  int active_obstacle_count() const;

  /// g(p) and its analytic gradient (product/chain rule).
  FieldEvaluation evaluate(const Vec2& p) const;

  /// True iff g(p) < threshold.
  bool is_allowed(const Vec2& p) const { return evaluate(p).value < params.threshold; }

 private:
  void resize_slots();
};

/// Populates a padded field from preprocessed (inflated) polygons. With more
/// polygons than slots, the max_obstacles nearest by minimum vertex-to-robot
/// distance are kept (ties broken by list order). A polygon with more edges
/// than max_edges is first replaced by a covering approximation (see
/// reduce_vertex_count). Deterministic for identical inputs.
FuzzyObstacleField load_polygons(const FuzzyParams& params,
                                 const std::vector<ConvexPolygon>& polygons,
                                 const Vec2& robot_position);

/// Covering approximation with at most max_vertices vertices: greedy
/// farthest-vertex subsampling of the original ring, then an outward edge
/// offset by the largest gap between dropped vertices and the subsampled
/// hull, so the result contains the original polygon.
ConvexPolygon reduce_vertex_count(const ConvexPolygon& poly, int max_vertices);

/// Field dump for plotting: nx x ny samples over [lo, hi], one "x,y,g" line
/// per sample after a header line.
std::string field_csv(const FuzzyObstacleField& field, const Vec2& lo, const Vec2& hi,
                      int nx, int ny);

/// Marching-squares segments of the level set g = params.threshold over the
/// same sample grid as field_csv.
std::vector<std::pair<Vec2, Vec2>> threshold_contour(const FuzzyObstacleField& field,
                                                     const Vec2& lo, const Vec2& hi,
                                                     int nx, int ny);

}  // namespace polynav
