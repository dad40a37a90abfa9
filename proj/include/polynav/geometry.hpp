#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace polynav {

using Vec2 = Eigen::Vector2d;

/// z-component of the 2D cross product.
inline double cross2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

/// One linear inequality b - a.dot(p) >= 0 with ||a||_2 = 1. The direction a
/// points away from the polygon interior, so b - a.dot(p) equals the signed
/// Euclidean distance of p to the edge line, positive on the interior side.
struct HalfSpace {
  Vec2 a = Vec2::Zero();
  double b = 0.0;

  double signed_distance(const Vec2& p) const { return b - a.dot(p); }
};

/// Divides (a, b) by ||a||_2. Throws std::invalid_argument on a zero-norm row.
HalfSpace normalize_halfspace(const Vec2& a, double b);

/// Convex polygon stored as a strictly counterclockwise vertex ring plus one
/// normalized half-space per edge. Edge r runs from vertex r to vertex r+1
/// (indices wrap), and halfspaces()[r] bounds exactly that edge.
///
/// Instances are immutable after construction; all queries are const and safe
/// to call concurrently.
class ConvexPolygon {
 public:
  /// Builds the half-space representation from a counterclockwise vertex
  /// list. For edge r the raw row is a = (dy, -dx), b = x_r*dy - y_r*dx,
  /// then both are normalized; the interior is { p | b - a.dot(p) >= 0 for
  /// all rows }.
  ///
  /// Throws std::invalid_argument for fewer than 3 vertices, non-finite
  /// coordinates, repeated consecutive vertices, collinear triples, clockwise
  /// order, or non-convex input.
  static ConvexPolygon from_ccw_vertices(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<HalfSpace>& halfspaces() const { return rows_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(vertices_.size()); }

  /// b'_r - a'_r.dot(p): signed distance from p to the edge-r line, positive
  /// on the interior side. Throws std::out_of_range on a bad index.
  double signed_edge_distance(int edge_index, const Vec2& p) const;

  /// Crisp membership: true iff every row satisfies b - a.dot(p) >= 0
  /// (boundary included).
  bool contains(const Vec2& p) const;

  /// Arithmetic mean of the vertices; strictly interior for a strictly
  /// convex polygon.
  Vec2 vertex_centroid() const;

 private:
  ConvexPolygon() = default;

  std::vector<Vec2> vertices_;
  std::vector<HalfSpace> rows_;
};

/// Orientation fix-up for externally supplied rings: reverses clockwise
/// input so that ConvexPolygon::from_ccw_vertices accepts it. Self-touching
/// or zero-area rings are rejected here; self-intersecting (hence
/// non-convex) rings are rejected by the subsequent construction.
std::vector<Vec2> canonicalize_ccw(std::vector<Vec2> vertices);

/// Convex hull (Andrew's monotone-chain variant of the Graham scan).
/// Returns the hull in counterclockwise order starting at the
/// lexicographically smallest point, with collinear points dropped.
/// Degenerate inputs yield fewer than 3 points; callers validate.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Signed Euclidean distance from p to the polygon boundary: positive
/// outside, negative inside (penetration depth), zero on the boundary.
/// Brute force over edges; independent of any fuzzy machinery.
double signed_distance(const ConvexPolygon& poly, const Vec2& p);

/// Shortest decimal string that round-trips the double (std::to_chars).
std::string to_string_shortest(double value);

/// One polygon per record: "poly: x1,y1 x2,y2 ..." in CCW vertex order.
std::string serialize_polygon(const ConvexPolygon& poly);

/// Parses the serialize_polygon format. Accepts clockwise rings (reordered
/// via canonicalize_ccw). Throws std::invalid_argument on malformed input.
ConvexPolygon parse_polygon(std::string_view line);

}  // namespace polynav
