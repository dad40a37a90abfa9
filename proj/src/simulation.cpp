#include "polynav/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polynav {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double to_real(const std::string& value, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw std::invalid_argument("bad numeric value for '" + key + "': '" + value + "'");
  }
  return v;
}

int to_int(const std::string& value, const std::string& key) {
  int v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw std::invalid_argument("bad integer value for '" + key + "': '" + value + "'");
  }
  return v;
}

std::vector<Vec2> parse_waypoints(const std::string& value) {
  std::vector<Vec2> points;
  size_t pos = 0;
  while (pos < value.size()) {
    size_t end = value.find(';', pos);
    if (end == std::string::npos) end = value.size();
    const std::string pair = value.substr(pos, end - pos);
    const size_t comma = pair.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("waypoint missing comma: '" + pair + "'");
    }
    points.emplace_back(to_real(pair.substr(0, comma), "waypoint x"),
                        to_real(pair.substr(comma + 1), "waypoint y"));
    pos = end + 1;
  }
  if (points.empty()) throw std::invalid_argument("waypoints list is empty");
  return points;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double idx = q * (values.size() - 1);
  const size_t lo = static_cast<size_t>(idx);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (idx - lo) * (values[hi] - values[lo]);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void Scenario::validate() const {
  if (reference.empty()) throw std::invalid_argument("scenario reference is empty");
  if (map.width <= 0 || map.height <= 0) throw std::invalid_argument("scenario has no map");
  if (!map.in_bounds(start.position())) {
    throw std::invalid_argument("start state lies outside the map bounds");
  }
  if (!(goal_tolerance > 0.0)) throw std::invalid_argument("goal_tolerance must be positive");
  if (max_cycles < 1) throw std::invalid_argument("max_cycles must be positive");
  planner.validate();
  inflation.validate();
}

Scenario parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario scn;
  bool have_map = false;
  bool have_reference = false;
  bool have_start = false;

  std::string section;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    if (line[first] == '[') {
      const size_t close = line.find(']', first);
      if (close == std::string::npos) throw std::invalid_argument("unterminated section: " + line);
      section = line.substr(first + 1, close - first - 1);
      continue;
    }

    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const size_t eq = token.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("expected key=value, got '" + token + "'");
      }
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);

      if (section == "map") {
        if (key == "file") {
          scn.map = parse_grid(read_file(base_dir / value));
          have_map = true;
        } else if (key == "occupied_threshold") {
          scn.occupied_threshold = static_cast<std::uint8_t>(to_int(value, key));
        } else {
          throw std::invalid_argument("unknown [map] key: " + key);
        }
      } else if (section == "reference") {
        if (key == "waypoints") {
          scn.reference = parse_waypoints(value);
          have_reference = true;
        } else {
          throw std::invalid_argument("unknown [reference] key: " + key);
        }
      } else if (section == "start") {
        if (key == "x") scn.start.px = to_real(value, key);
        else if (key == "y") scn.start.py = to_real(value, key);
        else if (key == "theta") scn.start.theta = wrap_angle(to_real(value, key));
        else if (key == "v") scn.start.v = to_real(value, key);
        else if (key == "omega") scn.start.omega = to_real(value, key);
        else throw std::invalid_argument("unknown [start] key: " + key);
        have_start = true;
      } else if (section == "planner") {
        PlannerConfig& p = scn.planner;
        if (key == "horizon") p.horizon = to_int(value, key);
        else if (key == "dt") p.dt = to_real(value, key);
        else if (key == "v_max") p.v_max = to_real(value, key);
        else if (key == "v_min") p.v_min = to_real(value, key);
        else if (key == "omega_max") p.omega_max = to_real(value, key);
        else if (key == "a_max") p.a_max = to_real(value, key);
        else if (key == "alpha_max") p.alpha_max = to_real(value, key);
        else if (key == "w_position") p.w_position = to_real(value, key);
        else if (key == "w_heading") p.w_heading = to_real(value, key);
        else if (key == "w_velocity") p.w_velocity = to_real(value, key);
        else if (key == "w_input") p.w_input = to_real(value, key);
        else if (key == "slack_weight") p.slack_weight = to_real(value, key);
        else if (key == "bound_weight") p.bound_weight = to_real(value, key);
        else if (key == "v_ref") p.v_ref = to_real(value, key);
        else if (key == "max_iterations") p.max_iterations = to_int(value, key);
        else if (key == "c") p.fuzzy.c = to_real(value, key);
        else if (key == "max_obstacles") p.fuzzy.max_obstacles = to_int(value, key);
        else if (key == "max_edges") p.fuzzy.max_edges = to_int(value, key);
        else if (key == "threshold") p.fuzzy.threshold = to_real(value, key);
        else if (key == "goal_tolerance") scn.goal_tolerance = to_real(value, key);
        else if (key == "max_cycles") scn.max_cycles = to_int(value, key);
        else throw std::invalid_argument("unknown [planner] key: " + key);
      } else if (section == "inflation") {
        InflationConfig& f = scn.inflation;
        if (key == "robot_radius") f.robot_radius = to_real(value, key);
        else if (key == "safety_margin") f.safety_margin = to_real(value, key);
        else if (key == "min_vertex_distance") f.min_vertex_distance = to_real(value, key);
        else if (key == "sharpness_cos_limit") f.sharpness_cos_limit = to_real(value, key);
        else throw std::invalid_argument("unknown [inflation] key: " + key);
      } else {
        throw std::invalid_argument("key outside a known section: " + key);
      }
    }
  }

  if (!have_map) throw std::invalid_argument("scenario is missing [map] file=");
  if (!have_reference) throw std::invalid_argument("scenario is missing [reference] waypoints=");
  if (!have_start) throw std::invalid_argument("scenario is missing [start]");
  scn.validate();
  return scn;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  return parse_scenario_text(read_file(path), path.parent_path());
}

const char* to_string(SimOutcome outcome) {
  switch (outcome) {
    case SimOutcome::goal_reached: return "goal_reached";
    case SimOutcome::collision: return "collision";
    case SimOutcome::timeout: return "timeout";
  }
  return "unknown";
}

namespace {

double min_distance_to(const std::vector<ConvexPolygon>& polys, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const ConvexPolygon& poly : polys) d = std::min(d, signed_distance(poly, p));
  return d;
}

}  // namespace

SimLog run_scenario(const Scenario& scn) {
  scn.validate();

  SimLog log;
  log.reference = scn.reference;
  log.world_min = scn.map.world_min();
  log.world_max = scn.map.world_max();
  log.field_samples_x = scn.map.width + 1;
  log.field_samples_y = scn.map.height + 1;
  log.original_polygons = extract_polygons(scn.map, scn.occupied_threshold);
  log.inflated_polygons = preprocess_all(log.original_polygons, scn.inflation, &log.diagnostics);
  log.start_field =
      load_polygons(scn.planner.fuzzy, log.inflated_polygons, scn.start.position());

  RobotState x = scn.start;
  const Vec2 goal = scn.reference.back();

  CycleRecord initial;
  initial.cycle = 0;
  initial.state = x;
  initial.g = log.start_field.evaluate(x.position()).value;
  initial.min_obstacle_distance = min_distance_to(log.original_polygons, x.position());
  log.records.push_back(initial);

  if (initial.min_obstacle_distance < 0.0) {
    log.outcome = SimOutcome::collision;
    return log;
  }
  if ((x.position() - goal).norm() <= scn.goal_tolerance) {
    log.outcome = SimOutcome::goal_reached;
    return log;
  }

  log.outcome = SimOutcome::timeout;
  PlanResult previous;
  bool warm = false;
  for (int cycle = 1; cycle <= scn.max_cycles; ++cycle) {
    const auto polygons = extract_polygons(scn.map, scn.occupied_threshold);
    const CycleResult cr = plan_cycle(x, scn.reference, polygons, scn.planner, scn.inflation,
                                      warm ? &previous : nullptr, &log.diagnostics);
    const ControlInput u = cr.plan.inputs.front();
    x = step_dynamics(x, u, scn.planner.dt);

    CycleRecord rec;
    rec.cycle = cycle;
    rec.state = x;
    rec.input = u;
    rec.g = cr.field.evaluate(x.position()).value;
    rec.min_obstacle_distance = min_distance_to(polygons, x.position());
    rec.solve_time = cr.plan.solve_time;
    rec.cycle_time = cr.total_time;
    rec.solve_status = cr.plan.solve_status;
    rec.cost = cr.plan.cost;
    rec.iterations = cr.plan.iterations;
    rec.max_slack = cr.plan.slack.empty()
                        ? 0.0
                        : *std::max_element(cr.plan.slack.begin(), cr.plan.slack.end());
    log.records.push_back(rec);

    previous = cr.plan;
    warm = true;

    if (rec.min_obstacle_distance < 0.0) {
      log.outcome = SimOutcome::collision;
      break;
    }
    if ((x.position() - goal).norm() <= scn.goal_tolerance) {
      log.outcome = SimOutcome::goal_reached;
      break;
    }
  }
  return log;
}

namespace {

std::string trajectory_csv(const SimLog& log) {
  std::string out = "cycle,x,y,theta,v,omega,g,min_dist,solve_time\n";
  for (const CycleRecord& r : log.records) {
    out += std::to_string(r.cycle);
    out += ',';
    out += to_string_shortest(r.state.px);
    out += ',';
    out += to_string_shortest(r.state.py);
    out += ',';
    out += to_string_shortest(r.state.theta);
    out += ',';
    out += to_string_shortest(r.state.v);
    out += ',';
    out += to_string_shortest(r.state.omega);
    out += ',';
    out += to_string_shortest(r.g);
    out += ',';
    out += to_string_shortest(r.min_obstacle_distance);
    out += ',';
    out += to_string_shortest(r.solve_time);
    out += '\n';
  }
  return out;
}

std::string summary_text(const SimLog& log) {
  std::vector<double> solve_times;
  std::vector<double> cycle_times;
  double min_dist = std::numeric_limits<double>::infinity();
  double max_g = 0.0;
  double path_length = 0.0;
  for (size_t i = 0; i < log.records.size(); ++i) {
    const CycleRecord& r = log.records[i];
    if (r.cycle > 0) {
      solve_times.push_back(r.solve_time);
      cycle_times.push_back(r.cycle_time);
      path_length += (r.state.position() - log.records[i - 1].state.position()).norm();
    }
    min_dist = std::min(min_dist, r.min_obstacle_distance);
    max_g = std::max(max_g, r.g);
  }

  std::string out;
  out += "outcome: " + std::string(to_string(log.outcome)) + "\n";
  out += "cycles: " + std::to_string(log.records.empty() ? 0 : log.records.back().cycle) + "\n";
  out += "obstacles: " + std::to_string(log.original_polygons.size()) + "\n";
  out += "path_length_m: " + to_string_shortest(path_length) + "\n";
  out += "min_obstacle_distance_m: " + to_string_shortest(min_dist) + "\n";
  out += "max_g: " + to_string_shortest(max_g) + "\n";
  out += "solve_time_p50_ms: " + to_string_shortest(1e3 * percentile(solve_times, 0.5)) + "\n";
  out += "solve_time_p90_ms: " + to_string_shortest(1e3 * percentile(solve_times, 0.9)) + "\n";
  out += "cycle_time_p50_ms: " + to_string_shortest(1e3 * percentile(cycle_times, 0.5)) + "\n";
  out += "cycle_time_p90_ms: " + to_string_shortest(1e3 * percentile(cycle_times, 0.9)) + "\n";
  for (const std::string& d : log.diagnostics) out += "diagnostic: " + d + "\n";
  return out;
}

constexpr double kPixelsPerMeter = 100.0;

std::string svg_point_list(const std::vector<Vec2>& pts, const Vec2& lo, const Vec2& hi) {
  std::string out;
  for (const Vec2& p : pts) {
    if (!out.empty()) out += ' ';
    out += to_string_shortest((p.x() - lo.x()) * kPixelsPerMeter);
    out += ',';
    out += to_string_shortest((hi.y() - p.y()) * kPixelsPerMeter);
  }
  return out;
}

std::string plot_svg(const SimLog& log) {
  const Vec2 lo = log.world_min;
  const Vec2 hi = log.world_max;
  const double w = (hi.x() - lo.x()) * kPixelsPerMeter;
  const double h = (hi.y() - lo.y()) * kPixelsPerMeter;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    to_string_shortest(w) + "\" height=\"" + to_string_shortest(h) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const ConvexPolygon& poly : log.original_polygons) {
    svg += "<polygon points=\"" + svg_point_list(poly.vertices(), lo, hi) +
           "\" fill=\"#b8b8b8\" stroke=\"#555555\"/>\n";
  }
  for (const ConvexPolygon& poly : log.inflated_polygons) {
    svg += "<polygon points=\"" + svg_point_list(poly.vertices(), lo, hi) +
           "\" fill=\"none\" stroke=\"#cc2222\"/>\n";
  }
  svg += "<polyline points=\"" + svg_point_list(log.reference, lo, hi) +
         "\" fill=\"none\" stroke=\"#22aa22\" stroke-dasharray=\"6,4\"/>\n";
  std::vector<Vec2> executed;
  executed.reserve(log.records.size());
  for (const CycleRecord& r : log.records) executed.push_back(r.state.position());
  svg += "<polyline points=\"" + svg_point_list(executed, lo, hi) +
         "\" fill=\"none\" stroke=\"#0066cc\" stroke-width=\"2\"/>\n";
  if (!executed.empty()) {
    svg += "<circle cx=\"" + to_string_shortest((executed.front().x() - lo.x()) * kPixelsPerMeter) +
           "\" cy=\"" + to_string_shortest((hi.y() - executed.front().y()) * kPixelsPerMeter) +
           "\" r=\"5\" fill=\"#22aa22\"/>\n";
  }
  if (!log.reference.empty()) {
    svg += "<circle cx=\"" + to_string_shortest((log.reference.back().x() - lo.x()) * kPixelsPerMeter) +
           "\" cy=\"" + to_string_shortest((hi.y() - log.reference.back().y()) * kPixelsPerMeter) +
           "\" r=\"5\" fill=\"none\" stroke=\"#22aa22\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void emit_artifacts(const SimLog& log, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + out_dir.string());

  write_file(out_dir / "trajectory.csv", trajectory_csv(log));
  write_file(out_dir / "field.csv",
             field_csv(log.start_field, log.world_min, log.world_max, log.field_samples_x,
                       log.field_samples_y));
  write_file(out_dir / "summary.txt", summary_text(log));
  write_file(out_dir / "plot.svg", plot_svg(log));
}

}  // namespace polynav
