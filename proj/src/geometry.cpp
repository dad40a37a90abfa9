#include "polynav/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polynav {

namespace {

constexpr double kVertexSlackTol = 1e-9;

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

// Relative collinearity tolerance shared by construction and hull pruning,
// so the hull never emits a ring the constructor would reject.
bool turns_left(const Vec2& e0, const Vec2& e1) {
  return cross2(e0, e1) > 1e-9 * e0.norm() * e1.norm();
}

bool nearly_collinear(const Vec2& e0, const Vec2& e1) {
  return std::abs(cross2(e0, e1)) <= 1e-9 * e0.norm() * e1.norm();
}

}  // namespace

HalfSpace normalize_halfspace(const Vec2& a, double b) {
  const double n = a.norm();
  if (!(n > 1e-12)) {
    throw std::invalid_argument("half-space row has (near-)zero norm");
  }
  return HalfSpace{a / n, b / n};
}

ConvexPolygon ConvexPolygon::from_ccw_vertices(std::vector<Vec2> vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) {
    throw std::invalid_argument("polygon needs at least 3 vertices");
  }
  for (const Vec2& v : vertices) {
    if (!finite(v)) throw std::invalid_argument("polygon vertex is not finite");
  }
  for (int i = 0; i < n; ++i) {
    const Vec2 e = vertices[(i + 1) % n] - vertices[i];
    if (e.norm() < 1e-12) {
      throw std::invalid_argument("repeated consecutive vertices (zero-length edge)");
    }
  }

  int negative = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (nearly_collinear(e0, e1)) {
      throw std::invalid_argument("collinear vertex triple");
    }
    if (!turns_left(e0, e1)) ++negative;
  }
  if (negative == n) {
    throw std::invalid_argument("vertices are in clockwise order");
  }
  if (negative > 0) {
    throw std::invalid_argument("polygon is not convex");
  }

  ConvexPolygon poly;
  poly.vertices_ = std::move(vertices);
  poly.rows_.reserve(n);
  for (int r = 0; r < n; ++r) {
    const Vec2& v = poly.vertices_[r];
    const Vec2 d = poly.vertices_[(r + 1) % n] - v;
    const Vec2 raw_a(d.y(), -d.x());
    const double raw_b = v.x() * d.y() - v.y() * d.x();
    poly.rows_.push_back(normalize_halfspace(raw_a, raw_b));
  }

  for (const Vec2& v : poly.vertices_) {
    for (const HalfSpace& row : poly.rows_) {
      if (row.signed_distance(v) < -kVertexSlackTol) {
        throw std::invalid_argument("vertex escapes the half-space intersection");
      }
    }
  }
  const Vec2 c = poly.vertex_centroid();
  for (const HalfSpace& row : poly.rows_) {
    if (!(row.signed_distance(c) > 0.0)) {
      throw std::invalid_argument("centroid is not strictly interior");
    }
  }
  return poly;
}

double ConvexPolygon::signed_edge_distance(int edge_index, const Vec2& p) const {
  if (edge_index < 0 || edge_index >= edge_count()) {
    throw std::out_of_range("edge index out of range");
  }
  return rows_[edge_index].signed_distance(p);
}

bool ConvexPolygon::contains(const Vec2& p) const {
  for (const HalfSpace& row : rows_) {
    if (row.signed_distance(p) < 0.0) return false;
  }
  return true;
}

Vec2 ConvexPolygon::vertex_centroid() const {
  Vec2 c = Vec2::Zero();
  for (const Vec2& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

std::vector<Vec2> canonicalize_ccw(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) {
    throw std::invalid_argument("polygon needs at least 3 vertices");
  }
  double twice_area = 0.0;
  const int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    twice_area += cross2(vertices[i], vertices[(i + 1) % n]);
  }
  if (std::abs(twice_area) < 1e-15) {
    throw std::invalid_argument("degenerate (zero-area) vertex ring");
  }
  if (twice_area < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
  }
  return vertices;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) {
                             return a.x() == b.x() && a.y() == b.y();
                           }),
               points.end());
  const int n = static_cast<int>(points.size());
  if (n < 3) return points;

  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && !turns_left(hull[k - 1] - hull[k - 2], points[i] - hull[k - 1])) --k;
    hull[k++] = points[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && !turns_left(hull[k - 1] - hull[k - 2], points[i] - hull[k - 1])) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return hull;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double signed_distance(const ConvexPolygon& poly, const Vec2& p) {
  double min_slack = std::numeric_limits<double>::infinity();
  for (const HalfSpace& row : poly.halfspaces()) {
    min_slack = std::min(min_slack, row.signed_distance(p));
  }
  if (min_slack >= 0.0) {
    return -min_slack;  // inside: negative penetration depth
  }
  double d = std::numeric_limits<double>::infinity();
  const auto& vs = poly.vertices();
  const int n = poly.vertex_count();
  for (int i = 0; i < n; ++i) {
    d = std::min(d, point_segment_distance(p, vs[i], vs[(i + 1) % n]));
  }
  return d;
}

std::string to_string_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string serialize_polygon(const ConvexPolygon& poly) {
  std::string out = "poly:";
  for (const Vec2& v : poly.vertices()) {
    out += ' ';
    out += to_string_shortest(v.x());
    out += ',';
    out += to_string_shortest(v.y());
  }
  return out;
}

namespace {

double parse_double(std::string_view s) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number in polygon record: '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

ConvexPolygon parse_polygon(std::string_view line) {
  constexpr std::string_view kPrefix = "poly:";
  if (!line.starts_with(kPrefix)) {
    throw std::invalid_argument("polygon record must start with 'poly:'");
  }
  line.remove_prefix(kPrefix.size());

  std::vector<Vec2> vertices;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    size_t end = line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    const std::string_view pair = line.substr(pos, end - pos);
    const size_t comma = pair.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("vertex pair missing comma: '" + std::string(pair) + "'");
    }
    vertices.emplace_back(parse_double(pair.substr(0, comma)),
                          parse_double(pair.substr(comma + 1)));
    pos = end;
  }
  return ConvexPolygon::from_ccw_vertices(canonicalize_ccw(std::move(vertices)));
}

}  // namespace polynav
