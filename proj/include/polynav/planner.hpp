#pragma once

#include "polynav/fuzzy_field.hpp"
#include "polynav/geometry.hpp"
#include "polynav/inflation.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace polynav {

/// Unicycle state. theta is kept in (-pi, pi].
struct RobotState {
  double px = 0.0;     // [m]
  double py = 0.0;     // [m]
  double theta = 0.0;  // [rad]
  double v = 0.0;      // [m/s]
  double omega = 0.0;  // [rad/s]

  Vec2 position() const { return Vec2(px, py); }
};

/// Acceleration-level inputs.
struct ControlInput {
  double a = 0.0;      // [m/s^2]
  double alpha = 0.0;  // [rad/s^2]
};

double wrap_angle(double angle);  // to (-pi, pi]

/// Forward-Euler unicycle step.
RobotState step_dynamics(const RobotState& x, const ControlInput& u, double dt);

struct PlannerConfig {
  int horizon = 20;      // N >= 2
  double dt = 0.2;       // [s]
  double v_max = 1.0;    // [m/s]
  double v_min = -0.2;   // [m/s]
  double omega_max = 1.5;   // [rad/s]
  double a_max = 1.0;       // [m/s^2]
  double alpha_max = 3.0;   // [rad/s^2]

  double w_position = 2.0;
  double w_heading = 0.0;
  double w_velocity = 0.5;
  double w_input = 0.05;
  double slack_weight = 300.0;
  double bound_weight = 100.0;  // quadratic penalty on velocity-bound violation

  double v_ref = 0.6;  // [m/s] progress speed along the reference path
  int max_iterations = 200;

  FuzzyParams fuzzy;

  void validate() const;  // throws std::invalid_argument
};

enum class SolveStatus { converged, max_iter, infeasible_fallback };

const char* to_string(SolveStatus status);

struct PlanResult {
  std::vector<RobotState> states;    // x_1 .. x_N (x_0 is the given state)
  std::vector<ControlInput> inputs;  // u_0 .. u_{N-1}
  std::vector<double> slack;         // per step 1..N, max(0, g_i - threshold)
  SolveStatus solve_status = SolveStatus::converged;
  double solve_time = 0.0;  // [s]
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_trace;  // accepted objective values, first = initial
};

/// Single-shooting problem: decision variables are the horizon inputs
/// [a_0, alpha_0, ..., a_{N-1}, alpha_{N-1}]; states are eliminated by
/// forward rollout. The objective is quadratic tracking plus input effort,
/// quadratic penalties on velocity-bound violation, and the soft obstacle
/// term slack_weight * max(0, g(p_i) - threshold)^2 per step (the closed-form
/// optimum over a nonnegative slack with g - slack <= threshold). Input box
/// bounds are enforced exactly by clamping.
class MpcProblem {
 public:
  MpcProblem(const RobotState& x0, const std::vector<Vec2>& reference_waypoints,
             FuzzyObstacleField field, const PlannerConfig& cfg);

  int horizon() const { return cfg_.horizon; }
  const PlannerConfig& config() const { return cfg_; }
  const RobotState& initial_state() const { return x0_; }
  const FuzzyObstacleField& field() const { return field_; }
  const std::vector<Vec2>& step_position_refs() const { return pos_refs_; }
  const std::vector<double>& step_speed_refs() const { return speed_refs_; }

  Eigen::VectorXd clamp_inputs(Eigen::VectorXd z) const;
  std::vector<RobotState> rollout(const Eigen::VectorXd& z) const;
  std::vector<double> slacks(const std::vector<RobotState>& states) const;

  double cost(const Eigen::VectorXd& z) const;
  double cost_and_gradient(const Eigen::VectorXd& z, Eigen::VectorXd& grad) const;

 private:
  double objective(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const;

  RobotState x0_;
  FuzzyObstacleField field_;
  PlannerConfig cfg_;
  std::vector<Vec2> pos_refs_;      // per step 1..N
  std::vector<double> speed_refs_;  // per step 1..N
  std::vector<double> heading_refs_;
};

/// Precomputes per-step references from the waypoint polyline: step i tracks
/// the arc-length point v_ref*dt*i ahead of the reference point closest to
/// x0, with the speed reference tapered to zero where the lookahead clamps
/// at the path end. Throws std::invalid_argument on an empty reference.
MpcProblem build_problem(const RobotState& x0, const std::vector<Vec2>& reference_waypoints,
                         FuzzyObstacleField field, const PlannerConfig& cfg);

/// Projected-gradient descent with Armijo backtracking. Stops when the
/// projected gradient norm falls below 1e-6, an accepted step decreases the
/// cost by less than 1e-10, or max_iterations is reached. A non-finite cost
/// or gradient at the initial point yields a max-deceleration braking plan
/// with status infeasible_fallback. Deterministic: identical inputs give
/// bit-identical results (solve_time excepted).
PlanResult solve(const MpcProblem& problem, const PlanResult* warm_start = nullptr);

/// One full MPC cycle: preprocess raw polygons, load the padded field, build
/// and solve. Degenerate polygons are handled fail-conservative inside
/// preprocess_all; this function does not throw on map content.
struct CycleResult {
  PlanResult plan;
  std::vector<ConvexPolygon> inflated_polygons;
  FuzzyObstacleField field;
  double preprocess_time = 0.0;
  double load_time = 0.0;
  double build_time = 0.0;
  double total_time = 0.0;
};

CycleResult plan_cycle(const RobotState& x0, const std::vector<Vec2>& reference_waypoints,
                       const std::vector<ConvexPolygon>& raw_polygons,
                       const PlannerConfig& cfg, const InflationConfig& inflation_cfg,
                       const PlanResult* warm_start = nullptr,
                       std::vector<std::string>* diagnostics = nullptr);

}  // namespace polynav
