#include "polynav/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace polynav {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Adjoint of one Euler step, indexed px, py, theta, v, omega.
struct Adjoint {
  double px = 0.0, py = 0.0, theta = 0.0, v = 0.0, omega = 0.0;
};

}  // namespace

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

RobotState step_dynamics(const RobotState& x, const ControlInput& u, double dt) {
  RobotState n;
  n.px = x.px + x.v * std::cos(x.theta) * dt;
  n.py = x.py + x.v * std::sin(x.theta) * dt;
  n.theta = wrap_angle(x.theta + x.omega * dt);
  n.v = x.v + u.a * dt;
  n.omega = x.omega + u.alpha * dt;
  return n;
}

void PlannerConfig::validate() const {
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(v_max > v_min)) throw std::invalid_argument("v_max must exceed v_min");
  if (!(omega_max > 0.0 && a_max > 0.0 && alpha_max > 0.0)) {
    throw std::invalid_argument("omega_max, a_max and alpha_max must be positive");
  }
  if (w_position < 0.0 || w_heading < 0.0 || w_velocity < 0.0 || w_input < 0.0 ||
      slack_weight < 0.0 || bound_weight < 0.0) {
    throw std::invalid_argument("weights must be nonnegative");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  fuzzy.validate();
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible_fallback: return "infeasible_fallback";
  }
  return "unknown";
}

MpcProblem::MpcProblem(const RobotState& x0, const std::vector<Vec2>& raw_waypoints,
                       FuzzyObstacleField field, const PlannerConfig& cfg)
    : x0_(x0), field_(std::move(field)), cfg_(cfg) {
  cfg_.validate();
  if (raw_waypoints.empty()) throw std::invalid_argument("reference path is empty");

  // Drop repeated consecutive waypoints; zero-length segments would break
  // the arc-length interpolation below.
  std::vector<Vec2> waypoints;
  waypoints.reserve(raw_waypoints.size());
  waypoints.push_back(raw_waypoints.front());
  for (const Vec2& w : raw_waypoints) {
    if ((w - waypoints.back()).norm() > 1e-12) waypoints.push_back(w);
  }

  // Cumulative arc length of the waypoint polyline.
  const int m = static_cast<int>(waypoints.size());
  std::vector<double> cum(m, 0.0);
  for (int i = 1; i < m; ++i) {
    cum[i] = cum[i - 1] + (waypoints[i] - waypoints[i - 1]).norm();
  }
  const double total = cum[m - 1];

  // Arc-length parameter of the point closest to the robot.
  double s0 = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const Vec2 p0 = x0.position();
  if (m == 1) {
    s0 = 0.0;
  } else {
    for (int i = 0; i + 1 < m; ++i) {
      const Vec2 seg = waypoints[i + 1] - waypoints[i];
      const double len2 = seg.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((p0 - waypoints[i]).dot(seg) / len2, 0.0, 1.0)
                                  : 0.0;
      const Vec2 q = waypoints[i] + t * seg;
      const double d = (p0 - q).norm();
      if (d < best) {
        best = d;
        s0 = cum[i] + t * std::sqrt(len2);
      }
    }
  }

  auto point_at = [&](double s, Vec2* tangent) {
    if (m == 1 || s <= 0.0) {
      if (tangent) *tangent = m > 1 ? (waypoints[1] - waypoints[0]).normalized() : Vec2(1, 0);
      return waypoints[0];
    }
    if (s >= total) {
      if (tangent) *tangent = (waypoints[m - 1] - waypoints[m - 2]).normalized();
      return waypoints[m - 1];
    }
    int i = 0;
    while (i + 1 < m && cum[i + 1] < s) ++i;
    const Vec2 seg = waypoints[i + 1] - waypoints[i];
    const double len = seg.norm();
    if (tangent) *tangent = seg / len;
    return Vec2(waypoints[i] + (s - cum[i]) / len * seg);
  };

  const int N = cfg_.horizon;
  pos_refs_.reserve(N);
  speed_refs_.reserve(N);
  heading_refs_.reserve(N);
  for (int i = 1; i <= N; ++i) {
    const double s = s0 + cfg_.v_ref * cfg_.dt * i;
    Vec2 tangent;
    pos_refs_.push_back(point_at(s, &tangent));
    speed_refs_.push_back(s <= total ? cfg_.v_ref : 0.0);
    heading_refs_.push_back(std::atan2(tangent.y(), tangent.x()));
  }
}

Eigen::VectorXd MpcProblem::clamp_inputs(Eigen::VectorXd z) const {
  for (int i = 0; i < cfg_.horizon; ++i) {
    z[2 * i] = std::clamp(z[2 * i], -cfg_.a_max, cfg_.a_max);
    z[2 * i + 1] = std::clamp(z[2 * i + 1], -cfg_.alpha_max, cfg_.alpha_max);
  }
  return z;
}

std::vector<RobotState> MpcProblem::rollout(const Eigen::VectorXd& z) const {
  std::vector<RobotState> states;
  states.reserve(cfg_.horizon);
  RobotState x = x0_;
  for (int i = 0; i < cfg_.horizon; ++i) {
    x = step_dynamics(x, ControlInput{z[2 * i], z[2 * i + 1]}, cfg_.dt);
    states.push_back(x);
  }
  return states;
}

std::vector<double> MpcProblem::slacks(const std::vector<RobotState>& states) const {
  std::vector<double> eps;
  eps.reserve(states.size());
  for (const RobotState& x : states) {
    const double g = field_.evaluate(x.position()).value;
    eps.push_back(std::max(0.0, g - cfg_.fuzzy.threshold));
  }
  return eps;
}

double MpcProblem::cost(const Eigen::VectorXd& z) const { return objective(z, nullptr); }

double MpcProblem::cost_and_gradient(const Eigen::VectorXd& z, Eigen::VectorXd& grad) const {
  grad.setZero(2 * cfg_.horizon);
  return objective(z, &grad);
}

double MpcProblem::objective(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const {
  const int N = cfg_.horizon;
  const double dt = cfg_.dt;

  // Forward rollout, keeping x_0 .. x_N.
  std::vector<RobotState> xs(N + 1);
  xs[0] = x0_;
  for (int i = 0; i < N; ++i) {
    xs[i + 1] = step_dynamics(xs[i], ControlInput{z[2 * i], z[2 * i + 1]}, dt);
  }

  double J = 0.0;
  std::vector<Adjoint> dLdx(N + 1);
  for (int i = 1; i <= N; ++i) {
    const RobotState& x = xs[i];
    const Vec2 e = x.position() - pos_refs_[i - 1];
    J += cfg_.w_position * e.squaredNorm();
    const double ev = x.v - speed_refs_[i - 1];
    J += cfg_.w_velocity * ev * ev;

    Adjoint& d = dLdx[i];
    d.px = 2.0 * cfg_.w_position * e.x();
    d.py = 2.0 * cfg_.w_position * e.y();
    d.v = 2.0 * cfg_.w_velocity * ev;

    if (cfg_.w_heading > 0.0) {
      const double eh = wrap_angle(x.theta - heading_refs_[i - 1]);
      J += cfg_.w_heading * eh * eh;
      d.theta += 2.0 * cfg_.w_heading * eh;
    }

    // Velocity box as quadratic penalties.
    const double over_v = std::max(0.0, x.v - cfg_.v_max);
    const double under_v = std::max(0.0, cfg_.v_min - x.v);
    const double over_w = std::max(0.0, x.omega - cfg_.omega_max);
    const double under_w = std::max(0.0, -cfg_.omega_max - x.omega);
    J += cfg_.bound_weight *
         (over_v * over_v + under_v * under_v + over_w * over_w + under_w * under_w);
    d.v += 2.0 * cfg_.bound_weight * (over_v - under_v);
    d.omega += 2.0 * cfg_.bound_weight * (over_w - under_w);

    // Soft obstacle constraint with the slack eliminated in closed form.
    const FieldEvaluation fe = field_.evaluate(x.position());
    const double viol = std::max(0.0, fe.value - cfg_.fuzzy.threshold);
    J += cfg_.slack_weight * viol * viol;
    if (viol > 0.0) {
      d.px += 2.0 * cfg_.slack_weight * viol * fe.gradient.x();
      d.py += 2.0 * cfg_.slack_weight * viol * fe.gradient.y();
    }
  }

  for (int i = 0; i < N; ++i) {
    J += cfg_.w_input * (z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1]);
  }

  if (grad) {
    for (int i = 0; i < N; ++i) {
      (*grad)[2 * i] += 2.0 * cfg_.w_input * z[2 * i];
      (*grad)[2 * i + 1] += 2.0 * cfg_.w_input * z[2 * i + 1];
    }
    // Backward sweep: lambda_i = dL/dx_i + A_i^T lambda_{i+1}.
    Adjoint lambda = dLdx[N];
    for (int i = N - 1; i >= 0; --i) {
      (*grad)[2 * i] += dt * lambda.v;
      (*grad)[2 * i + 1] += dt * lambda.omega;
      if (i > 0) {
        const RobotState& x = xs[i];  // state the step departs from
        Adjoint prev;
        prev.px = lambda.px;
        prev.py = lambda.py;
        prev.theta = lambda.theta +
                     (-x.v * std::sin(x.theta) * dt) * lambda.px +
                     (x.v * std::cos(x.theta) * dt) * lambda.py;
        prev.v = lambda.v + std::cos(x.theta) * dt * lambda.px +
                 std::sin(x.theta) * dt * lambda.py;
        prev.omega = lambda.omega + dt * lambda.theta;
        lambda.px = dLdx[i].px + prev.px;
        lambda.py = dLdx[i].py + prev.py;
        lambda.theta = dLdx[i].theta + prev.theta;
        lambda.v = dLdx[i].v + prev.v;
        lambda.omega = dLdx[i].omega + prev.omega;
      }
    }
  }
  return J;
}

MpcProblem build_problem(const RobotState& x0, const std::vector<Vec2>& reference_waypoints,
                         FuzzyObstacleField field, const PlannerConfig& cfg) {
  return MpcProblem(x0, reference_waypoints, std::move(field), cfg);
}

namespace {

PlanResult braking_fallback(const MpcProblem& prob, Clock::time_point t0) {
  const PlannerConfig& cfg = prob.config();
  const int N = cfg.horizon;
  PlanResult res;
  res.solve_status = SolveStatus::infeasible_fallback;
  res.inputs.reserve(N);
  RobotState x = prob.initial_state();
  Eigen::VectorXd z(2 * N);
  for (int i = 0; i < N; ++i) {
    ControlInput u;
    u.a = std::clamp(-x.v / cfg.dt, -cfg.a_max, cfg.a_max);
    u.alpha = std::clamp(-x.omega / cfg.dt, -cfg.alpha_max, cfg.alpha_max);
    z[2 * i] = u.a;
    z[2 * i + 1] = u.alpha;
    res.inputs.push_back(u);
    x = step_dynamics(x, u, cfg.dt);
  }
  res.states = prob.rollout(z);
  res.slack = prob.slacks(res.states);
  res.cost = prob.cost(z);
  res.iterations = 0;
  res.solve_time = seconds_since(t0);
  return res;
}

}  // namespace

PlanResult solve(const MpcProblem& prob, const PlanResult* warm_start) {
  const auto t0 = Clock::now();
  const PlannerConfig& cfg = prob.config();
  const int N = cfg.horizon;
  const int dim = 2 * N;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  if (warm_start && static_cast<int>(warm_start->inputs.size()) == N) {
    for (int i = 0; i < N; ++i) {
      const ControlInput& u =
          warm_start->inputs[std::min(i + 1, N - 1)];  // shift by one, repeat last
      z[2 * i] = u.a;
      z[2 * i + 1] = u.alpha;
    }
  }
  z = prob.clamp_inputs(std::move(z));

  Eigen::VectorXd grad(dim);
  double J = prob.cost_and_gradient(z, grad);
  if (!std::isfinite(J) || !grad.allFinite()) {
    return braking_fallback(prob, t0);
  }

  PlanResult res;
  res.cost_trace.push_back(J);
  res.solve_status = SolveStatus::max_iter;
  double step_init = 1.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::VectorXd projected = z - prob.clamp_inputs(z - grad);
    if (projected.norm() < 1e-6) {
      res.solve_status = SolveStatus::converged;
      break;
    }

    double t = step_init;
    bool accepted = false;
    Eigen::VectorXd z_try;
    double J_try = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      z_try = prob.clamp_inputs(z - t * grad);
      J_try = prob.cost(z_try);
      const double move2 = (z_try - z).squaredNorm();
      if (std::isfinite(J_try) && J_try <= J - 1e-4 / t * move2 && move2 > 0.0) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.solve_status = SolveStatus::converged;  // no descent at machine precision
      break;
    }

    const double decrease = J - J_try;
    z = std::move(z_try);
    J = prob.cost_and_gradient(z, grad);
    res.cost_trace.push_back(J);
    step_init = std::min(t * 2.0, 1e6);
    if (decrease < 1e-10) {
      ++it;
      res.solve_status = SolveStatus::converged;
      break;
    }
  }

  res.iterations = it;
  res.states = prob.rollout(z);
  res.slack = prob.slacks(res.states);
  res.inputs.reserve(N);
  for (int i = 0; i < N; ++i) {
    res.inputs.push_back(ControlInput{z[2 * i], z[2 * i + 1]});
  }
  res.cost = J;
  res.solve_time = seconds_since(t0);
  return res;
}

CycleResult plan_cycle(const RobotState& x0, const std::vector<Vec2>& reference_waypoints,
                       const std::vector<ConvexPolygon>& raw_polygons,
                       const PlannerConfig& cfg, const InflationConfig& inflation_cfg,
                       const PlanResult* warm_start, std::vector<std::string>* diagnostics) {
  CycleResult out;
  const auto t0 = Clock::now();

  out.inflated_polygons = preprocess_all(raw_polygons, inflation_cfg, diagnostics);
  out.preprocess_time = seconds_since(t0);

  const auto t1 = Clock::now();
  out.field = load_polygons(cfg.fuzzy, out.inflated_polygons, x0.position());
  out.load_time = seconds_since(t1);

  const auto t2 = Clock::now();
  MpcProblem problem = build_problem(x0, reference_waypoints, out.field, cfg);
  out.build_time = seconds_since(t2);

  out.plan = solve(problem, warm_start);
  out.total_time = seconds_since(t0);
  return out;
}

}  // namespace polynav
