#include "polynav/fuzzy_field.hpp"

#include "polynav/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace polynav {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void FuzzyParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("scaling factor c must be positive");
  if (max_obstacles < 0) throw std::invalid_argument("max_obstacles must be nonnegative");
  if (max_edges < 1) throw std::invalid_argument("max_edges must be at least 1");
  if (!(threshold > 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument("threshold must lie in (0, 0.5]");
  }
}

void FuzzyObstacleField::resize_slots() {
  const int total = params.max_obstacles * params.max_edges;
  slot_a.assign(total, Vec2::Zero());
  slot_b.assign(total, 0.0);
  obstacle_active.assign(params.max_obstacles, 0);
  edge_active.assign(total, 0);
}

int FuzzyObstacleField::active_obstacle_count() const {
  return static_cast<int>(
      std::count(obstacle_active.begin(), obstacle_active.end(), std::uint8_t{1}));
}

FieldEvaluation FuzzyObstacleField::evaluate(const Vec2& p) const {
  FieldEvaluation out;
  const int O = params.max_obstacles;
  const int V = params.max_edges;
  std::vector<double> factor(V);
  std::vector<double> sig(V);
  std::vector<double> prefix(V);

  for (int s = 0; s < O; ++s) {
    if (!obstacle_active[s]) continue;

    double running = 1.0;
    for (int r = 0; r < V; ++r) {
      prefix[r] = running;
      const int k = slot_index(s, r);
      if (edge_active[k]) {
        sig[r] = sigmoid(params.c * (slot_b[k] - slot_a[k].dot(p)));
        factor[r] = sig[r];
      } else {
        factor[r] = 1.0;  // neutral: exactly (1-d) + d*g with d = 0
      }
      running *= factor[r];
    }
    out.value += running;

    // d(product)/dp via prefix/suffix products; avoids dividing by factors
    // that may be ~0 deep outside an edge.
    double suffix = 1.0;
    for (int r = V - 1; r >= 0; --r) {
      const int k = slot_index(s, r);
      if (edge_active[k]) {
        const double dsig = sig[r] * (1.0 - sig[r]) * params.c;
        out.gradient -= prefix[r] * suffix * dsig * slot_a[k];
      }
      suffix *= factor[r];
    }
  }
  return out;
}

namespace {

double min_vertex_distance_to(const ConvexPolygon& poly, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec2& v : poly.vertices()) d = std::min(d, (v - p).norm());
  return d;
}

}  // namespace

FuzzyObstacleField load_polygons(const FuzzyParams& params,
                                 const std::vector<ConvexPolygon>& polygons,
                                 const Vec2& robot_position) {
  FuzzyObstacleField field(params);

  std::vector<int> chosen(polygons.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (static_cast<int>(polygons.size()) > params.max_obstacles) {
    std::stable_sort(chosen.begin(), chosen.end(), [&](int lhs, int rhs) {
      return min_vertex_distance_to(polygons[lhs], robot_position) <
             min_vertex_distance_to(polygons[rhs], robot_position);
    });
    chosen.resize(params.max_obstacles);
  }

  for (int s = 0; s < static_cast<int>(chosen.size()); ++s) {
    const ConvexPolygon* poly = &polygons[chosen[s]];
    ConvexPolygon reduced = (poly->edge_count() > params.max_edges)
                                ? reduce_vertex_count(*poly, params.max_edges)
                                : *poly;
    field.obstacle_active[s] = 1;
    for (int r = 0; r < reduced.edge_count(); ++r) {
      const int k = field.slot_index(s, r);
      field.slot_a[k] = reduced.halfspaces()[r].a;
      field.slot_b[k] = reduced.halfspaces()[r].b;
      field.edge_active[k] = 1;
    }
  }
  return field;
}

ConvexPolygon reduce_vertex_count(const ConvexPolygon& poly, int max_vertices) {
  if (max_vertices < 3) throw std::invalid_argument("max_vertices must be at least 3");
  if (poly.vertex_count() <= max_vertices) return poly;

  const auto& vs = poly.vertices();
  const int n = poly.vertex_count();

  // Greedy farthest-vertex subsample, seeded at the lexicographically
  // smallest vertex for determinism.
  int seed = 0;
  for (int i = 1; i < n; ++i) {
    if (vs[i].x() < vs[seed].x() ||
        (vs[i].x() == vs[seed].x() && vs[i].y() < vs[seed].y())) {
      seed = i;
    }
  }
  std::vector<bool> picked(n, false);
  picked[seed] = true;
  for (int count = 1; count < max_vertices; ++count) {
    int best = -1;
    double best_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (picked[i]) continue;
      double dist = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        if (picked[j]) dist = std::min(dist, (vs[i] - vs[j]).norm());
      }
      if (dist > best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    picked[best] = true;
  }

  std::vector<Vec2> sub;
  sub.reserve(max_vertices);
  for (int i = 0; i < n; ++i) {
    if (picked[i]) sub.push_back(vs[i]);  // original CCW order is preserved
  }
  ConvexPolygon approx = ConvexPolygon::from_ccw_vertices(std::move(sub));

  // Dropped vertices sit outside the subsampled hull; cover them by
  // offsetting every edge outward by the largest gap.
  double gap = 0.0;
  const auto& sv = approx.vertices();
  for (int i = 0; i < n; ++i) {
    if (picked[i] || approx.contains(vs[i])) continue;
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < approx.vertex_count(); ++j) {
      d = std::min(d, point_segment_distance(vs[i], sv[j],
                                             sv[(j + 1) % approx.vertex_count()]));
    }
    gap = std::max(gap, d);
  }
  if (gap > 0.0) {
    InflationConfig offset;
    offset.robot_radius = gap;
    offset.safety_margin = 0.0;
    approx = inflate(approx, offset);
  }
  return approx;
}

std::string field_csv(const FuzzyObstacleField& field, const Vec2& lo, const Vec2& hi,
                      int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("field_csv needs at least 2x2 samples");
  std::string out = "x,y,g\n";
  for (int j = 0; j < ny; ++j) {
    const double y = lo.y() + (hi.y() - lo.y()) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double x = lo.x() + (hi.x() - lo.x()) * i / (nx - 1);
      out += to_string_shortest(x);
      out += ',';
      out += to_string_shortest(y);
      out += ',';
      out += to_string_shortest(field.evaluate(Vec2(x, y)).value);
      out += '\n';
    }
  }
  return out;
}

std::vector<std::pair<Vec2, Vec2>> threshold_contour(const FuzzyObstacleField& field,
                                                     const Vec2& lo, const Vec2& hi,
                                                     int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("contour needs at least 2x2 samples");
  const double level = field.params.threshold;

  std::vector<double> g(static_cast<size_t>(nx) * ny);
  auto sample_x = [&](int i) { return lo.x() + (hi.x() - lo.x()) * i / (nx - 1); };
  auto sample_y = [&](int j) { return lo.y() + (hi.y() - lo.y()) * j / (ny - 1); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      g[j * nx + i] = field.evaluate(Vec2(sample_x(i), sample_y(j))).value;
    }
  }

  auto interp = [&](double xa, double ya, double ga, double xb, double yb, double gb) {
    const double t = (level - ga) / (gb - ga);
    return Vec2(xa + t * (xb - xa), ya + t * (yb - ya));
  };

  std::vector<std::pair<Vec2, Vec2>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double x0 = sample_x(i), x1 = sample_x(i + 1);
      const double y0 = sample_y(j), y1 = sample_y(j + 1);
      const double g00 = g[j * nx + i], g10 = g[j * nx + i + 1];
      const double g01 = g[(j + 1) * nx + i], g11 = g[(j + 1) * nx + i + 1];
      int mask = 0;
      if (g00 >= level) mask |= 1;
      if (g10 >= level) mask |= 2;
      if (g11 >= level) mask |= 4;
      if (g01 >= level) mask |= 8;
      if (mask == 0 || mask == 15) continue;

      // Edge crossings: bottom, right, top, left.
      Vec2 pb, pr, pt, pl;
      const bool cb = ((mask & 1) != 0) != ((mask & 2) != 0);
      const bool cr = ((mask & 2) != 0) != ((mask & 4) != 0);
      const bool ct = ((mask & 4) != 0) != ((mask & 8) != 0);
      const bool cl = ((mask & 8) != 0) != ((mask & 1) != 0);
      if (cb) pb = interp(x0, y0, g00, x1, y0, g10);
      if (cr) pr = interp(x1, y0, g10, x1, y1, g11);
      if (ct) pt = interp(x1, y1, g11, x0, y1, g01);
      if (cl) pl = interp(x0, y1, g01, x0, y0, g00);

      switch (mask) {
        case 1: case 14: segments.emplace_back(pl, pb); break;
        case 2: case 13: segments.emplace_back(pb, pr); break;
        case 4: case 11: segments.emplace_back(pr, pt); break;
        case 8: case 7:  segments.emplace_back(pt, pl); break;
        case 3: case 12: segments.emplace_back(pl, pr); break;
        case 6: case 9:  segments.emplace_back(pb, pt); break;
        case 5: case 10: {
          // Saddle: disambiguate with the cell-center value.
          const double gc = field.evaluate(Vec2(0.5 * (x0 + x1), 0.5 * (y0 + y1))).value;
          const bool center_in = gc >= level;
          if ((mask == 5) == center_in) {
            segments.emplace_back(pl, pt);
            segments.emplace_back(pb, pr);
          } else {
            segments.emplace_back(pl, pb);
            segments.emplace_back(pr, pt);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segments;
}

}  // namespace polynav
