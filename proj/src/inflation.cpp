#include "polynav/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polynav {

namespace {

Vec2 unit_edge(const Vec2& from, const Vec2& to) { return (to - from).normalized(); }

// Unit directions of the edges arriving at and leaving vertex i.
struct VertexEdges {
  Vec2 in;
  Vec2 out;
};

VertexEdges edges_at(const ConvexPolygon& poly, int i) {
  const auto& vs = poly.vertices();
  const int n = poly.vertex_count();
  return {unit_edge(vs[(i + n - 1) % n], vs[i]), unit_edge(vs[i], vs[(i + 1) % n])};
}

double min_pairwise_vertex_distance(const ConvexPolygon& poly) {
  const auto& vs = poly.vertices();
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vs.size(); ++i) {
    for (size_t j = i + 1; j < vs.size(); ++j) {
      d = std::min(d, (vs[i] - vs[j]).norm());
    }
  }
  return d;
}

ConvexPolygon bounding_box_expanded(const ConvexPolygon& poly, double r) {
  Vec2 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const Vec2& v : poly.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  lo.array() -= r;
  hi.array() += r;
  return ConvexPolygon::from_ccw_vertices(
      {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
}

}  // namespace

void InflationConfig::validate() const {
  if (!(robot_radius > 0.0)) throw std::invalid_argument("robot_radius must be positive");
  if (!(safety_margin >= 0.0)) throw std::invalid_argument("safety_margin must be nonnegative");
  if (!(min_vertex_distance > 0.0)) {
    throw std::invalid_argument("min_vertex_distance must be positive");
  }
  if (!(sharpness_cos_limit > 0.0 && sharpness_cos_limit < 1.0)) {
    throw std::invalid_argument("sharpness_cos_limit must be in (0, 1)");
  }
}

bool is_sharp_vertex(const ConvexPolygon& poly, int index, const InflationConfig& cfg) {
  if (index < 0 || index >= poly.vertex_count()) {
    throw std::out_of_range("vertex index out of range");
  }
  const VertexEdges e = edges_at(poly, index);
  // e_in.dot(-e_out) = cos(interior angle)
  return e.in.dot(-e.out) > cfg.sharpness_cos_limit;
}

ConvexPolygon inflate(const ConvexPolygon& poly, const InflationConfig& cfg) {
  const double r = cfg.effective_radius();
  if (r == 0.0) return poly;

  const auto& vs = poly.vertices();
  const int n = poly.vertex_count();
  std::vector<Vec2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const VertexEdges e = edges_at(poly, i);
    // cross(e_in, e_out) = sin(interior angle) = cos(alpha) in the shift
    // distance d = r / cos(alpha).
    const double cos_alpha = cross2(e.in, e.out);
    if (cos_alpha <= 1e-9) {
      throw std::invalid_argument("vertex too sharp to inflate; split it first");
    }
    const double d = r / cos_alpha;
    out.push_back(vs[i] + d * e.in - d * e.out);
  }
  return ConvexPolygon::from_ccw_vertices(std::move(out));
}

ConvexPolygon split_sharp_vertex(const ConvexPolygon& poly, int vertex_index,
                                 const InflationConfig& cfg,
                                 std::vector<std::string>* diagnostics) {
  if (!is_sharp_vertex(poly, vertex_index, cfg)) {
    if (diagnostics) {
      diagnostics->push_back("split requested at non-sharp vertex " +
                             std::to_string(vertex_index) + "; polygon unchanged");
    }
    return poly;
  }

  const auto& vs = poly.vertices();
  const VertexEdges e = edges_at(poly, vertex_index);
  const Vec2 half_angle = (-e.in + e.out).normalized();      // bisector, into the polygon
  const Vec2 o(half_angle.y(), -half_angle.x());             // rotated clockwise by 90 deg
  const double d = std::min(cfg.min_vertex_distance, min_pairwise_vertex_distance(poly));
  const Vec2 v = vs[vertex_index];

  std::vector<Vec2> out;
  out.reserve(vs.size() + 1);
  for (int i = 0; i < poly.vertex_count(); ++i) {
    if (i == vertex_index) {
      out.push_back(v - 0.5 * d * o);
      out.push_back(v + 0.5 * d * o);
    } else {
      out.push_back(vs[i]);
    }
  }
  try {
    return ConvexPolygon::from_ccw_vertices(std::move(out));
  } catch (const std::exception& ex) {
    if (diagnostics) {
      diagnostics->push_back("corner split at vertex " + std::to_string(vertex_index) +
                             " produced an invalid ring (" + ex.what() +
                             "); polygon unchanged");
    }
    return poly;
  }
}

std::vector<ConvexPolygon> preprocess_all(const std::vector<ConvexPolygon>& polys,
                                          const InflationConfig& cfg,
                                          std::vector<std::string>* diagnostics) {
  cfg.validate();
  std::vector<ConvexPolygon> out;
  out.reserve(polys.size());
  for (size_t idx = 0; idx < polys.size(); ++idx) {
    try {
      ConvexPolygon p = polys[idx];
      // Each split blunts the corner it replaces, so the pass count is
      // bounded by the original vertex count.
      const int max_passes = 2 * p.vertex_count();
      for (int pass = 0; pass < max_passes; ++pass) {
        int sharp = -1;
        for (int i = 0; i < p.vertex_count(); ++i) {
          if (is_sharp_vertex(p, i, cfg)) {
            sharp = i;
            break;
          }
        }
        if (sharp < 0) break;
        ConvexPolygon q = split_sharp_vertex(p, sharp, cfg, diagnostics);
        if (q.vertex_count() == p.vertex_count()) break;  // split could not apply
        p = std::move(q);
      }
      out.push_back(inflate(p, cfg));
    } catch (const std::exception& ex) {
      if (diagnostics) {
        diagnostics->push_back("preprocessing failed for polygon " + std::to_string(idx) +
                               " (" + ex.what() + "); using expanded bounding box");
      }
      out.push_back(bounding_box_expanded(polys[idx], cfg.effective_radius()));
    }
  }
  return out;
}

}  // namespace polynav
