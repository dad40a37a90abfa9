#pragma once

#include "polynav/grid_map.hpp"
#include "polynav/planner.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace polynav {

/// Everything one closed-loop run needs.
struct Scenario {
  OccupancyGrid map;
  std::vector<Vec2> reference;
  RobotState start;
  double goal_tolerance = 0.2;  // [m] around the last reference waypoint
  int max_cycles = 300;
  PlannerConfig planner;
  InflationConfig inflation;
  std::uint8_t occupied_threshold = 50;

  void validate() const;  // throws std::invalid_argument
};

/// Key-value scenario file with sections [map], [reference], [start],
/// [planner], [inflation]; the map file path is resolved relative to the
/// scenario file. Throws std::invalid_argument / std::runtime_error on
/// malformed input.
Scenario parse_scenario_file(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir);

enum class SimOutcome { goal_reached, collision, timeout };
const char* to_string(SimOutcome outcome);

struct CycleRecord {
  int cycle = 0;  // 0 = initial state, before any input
  RobotState state;
  ControlInput input;  // input applied to reach this state
  double g = 0.0;      // field value at the executed position
  double min_obstacle_distance = 0.0;  // signed oracle distance to the original polygons
  double solve_time = 0.0;
  double cycle_time = 0.0;
  SolveStatus solve_status = SolveStatus::converged;
  double cost = 0.0;
  int iterations = 0;
  double max_slack = 0.0;
};

struct SimLog {
  SimOutcome outcome = SimOutcome::timeout;
  std::vector<CycleRecord> records;  // records[0] is the initial state
  std::vector<ConvexPolygon> original_polygons;
  std::vector<ConvexPolygon> inflated_polygons;
  FuzzyObstacleField start_field;  // field snapshot at the start state
  std::vector<Vec2> reference;
  Vec2 world_min = Vec2::Zero();
  Vec2 world_max = Vec2::Zero();
  int field_samples_x = 2;
  int field_samples_y = 2;
  std::vector<std::string> diagnostics;
};

/// Closed loop: extract polygons, plan, apply the first input through the
/// same dynamics the planner predicts with, log, until the goal is within
/// tolerance, the robot center penetrates an original polygon (collision),
/// or max_cycles elapse.
SimLog run_scenario(const Scenario& scenario);

/// Writes trajectory.csv, field.csv, summary.txt and plot.svg into out_dir
/// (created if missing). Throws std::runtime_error when a file cannot be
/// written.
void emit_artifacts(const SimLog& log, const std::filesystem::path& out_dir);

}  // namespace polynav
