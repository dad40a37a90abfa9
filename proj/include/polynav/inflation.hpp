#pragma once

#include "polynav/geometry.hpp"

#include <string>
#include <vector>

namespace polynav {

/// Parameters for obstacle inflation and sharp-corner splitting.
struct InflationConfig {
  /// Robot circumscribed radius r_bot [m].
  double robot_radius = 0.3;
  /// Extra additive inflation on top of robot_radius [m]; gives the soft
  /// constraints headroom when polygons jitter between cycles.
  double safety_margin = 0.05;
  /// Cap on the corner-split spacing d_min [m]; the effective spacing is the
  /// smaller of this and the polygon's own minimum pairwise vertex distance.
  double min_vertex_distance = 0.2;
  /// A vertex is sharp when cos(interior angle) exceeds this limit, i.e. the
  /// interior angle is below acos(limit). Default: 30 degrees.
  double sharpness_cos_limit = 0.86602540378443864676;  // cos(pi/6)

  double effective_radius() const { return robot_radius + safety_margin; }

  void validate() const;  // throws std::invalid_argument
};

/// True when the interior angle at vertex `index` is below the configured
/// sharpness limit.
bool is_sharp_vertex(const ConvexPolygon& poly, int index, const InflationConfig& cfg);

/// Offsets every edge outward by robot_radius + safety_margin. Each output
/// vertex is v' = v + d*e_in - d*e_out with d = r / cos(alpha), where e_in
/// and e_out are the unit edge directions into and out of the vertex and
/// cos(alpha) = cross(e_in, e_out) (the sine of the interior angle). The
/// output edges lie on the input edge lines shifted by exactly r along their
/// outward normals.
///
/// Throws std::invalid_argument when a vertex is so sharp (or flat) that
/// cos(alpha) <= 1e-9; sharp corners must be split first.
ConvexPolygon inflate(const ConvexPolygon& poly, const InflationConfig& cfg);

/// Replaces a sharp vertex by two points v -/+ 0.5*d*o, where o is the
/// interior half-angle direction rotated clockwise by 90 degrees and d is the
/// capped split spacing (see InflationConfig::min_vertex_distance). Splitting
/// a non-sharp vertex is a no-op with a warning pushed to `diagnostics`.
ConvexPolygon split_sharp_vertex(const ConvexPolygon& poly, int vertex_index,
                                 const InflationConfig& cfg,
                                 std::vector<std::string>* diagnostics = nullptr);

/// Full preprocessing for one cycle: split every sharp vertex, then inflate.
/// A polygon whose preprocessing fails is replaced by its axis-aligned
/// bounding box expanded by the effective radius (fail-conservative), with a
/// diagnostic recorded.
std::vector<ConvexPolygon> preprocess_all(const std::vector<ConvexPolygon>& polys,
                                          const InflationConfig& cfg,
                                          std::vector<std::string>* diagnostics = nullptr);

}  // namespace polynav
