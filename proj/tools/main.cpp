#include "polynav/fuzzy_field.hpp"
#include "polynav/grid_map.hpp"
#include "polynav/simulation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using namespace polynav;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

int exit_code(SimOutcome outcome) {
  switch (outcome) {
    case SimOutcome::goal_reached: return 0;
    case SimOutcome::collision: return 2;
    case SimOutcome::timeout: return 3;
  }
  return 1;
}

int run_plan(const fs::path& scenario_path, const fs::path& out_dir, double c_scale,
             int max_obstacles, int max_edges, double threshold, int horizon,
             bool disable_constraints) {
  Scenario scn = parse_scenario_file(scenario_path);
  if (c_scale > 0.0) scn.planner.fuzzy.c = c_scale;
  if (max_obstacles >= 0) scn.planner.fuzzy.max_obstacles = max_obstacles;
  if (max_edges > 0) scn.planner.fuzzy.max_edges = max_edges;
  if (threshold > 0.0) scn.planner.fuzzy.threshold = threshold;
  if (horizon > 0) scn.planner.horizon = horizon;
  if (disable_constraints) scn.planner.fuzzy.max_obstacles = 0;

  const SimLog log = run_scenario(scn);
  emit_artifacts(log, out_dir);
  std::cout << "outcome: " << to_string(log.outcome) << " after "
            << log.records.back().cycle << " cycles; artifacts in " << out_dir.string()
            << "\n";
  return exit_code(log.outcome);
}

int run_field(const fs::path& scenario_path, const fs::path& out_dir) {
  const Scenario scn = parse_scenario_file(scenario_path);
  const auto polygons = extract_polygons(scn.map, scn.occupied_threshold);
  const auto inflated = preprocess_all(polygons, scn.inflation);
  const FuzzyObstacleField field =
      load_polygons(scn.planner.fuzzy, inflated, scn.start.position());

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + out_dir.string());

  const Vec2 lo = scn.map.world_min();
  const Vec2 hi = scn.map.world_max();
  const int nx = scn.map.width + 1;
  const int ny = scn.map.height + 1;
  write_file(out_dir / "field.csv", field_csv(field, lo, hi, nx, ny));

  std::string contour = "x1,y1,x2,y2\n";
  for (const auto& [a, b] : threshold_contour(field, lo, hi, nx, ny)) {
    contour += to_string_shortest(a.x()) + ',' + to_string_shortest(a.y()) + ',' +
               to_string_shortest(b.x()) + ',' + to_string_shortest(b.y()) + '\n';
  }
  write_file(out_dir / "contour.csv", contour);
  std::cout << "field sampled over [" << lo.x() << "," << lo.y() << "]..[" << hi.x() << ","
            << hi.y() << "]; artifacts in " << out_dir.string() << "\n";
  return 0;
}

int run_extract(const fs::path& map_path, const fs::path& out_dir) {
  const OccupancyGrid grid = parse_grid(read_file(map_path));
  const auto polygons = extract_polygons(grid);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + out_dir.string());

  std::string out;
  for (const ConvexPolygon& poly : polygons) {
    out += serialize_polygon(poly);
    out += '\n';
  }
  write_file(out_dir / "polygons.txt", out);
  std::cout << "extracted " << polygons.size() << " polygons to "
            << (out_dir / "polygons.txt").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPC trajectory planner with smooth polygonal obstacle constraints"};
  app.require_subcommand(1);

  std::string scenario;
  std::string map_file;
  std::string out_dir;
  double c_scale = -1.0;
  int max_obstacles = -1;
  int max_edges = -1;
  double threshold = -1.0;
  int horizon = -1;
  bool disable_constraints = false;

  CLI::App* plan = app.add_subcommand("plan", "run a closed-loop scenario");
  plan->add_option("--scenario", scenario, "scenario file")->required();
  plan->add_option("--out", out_dir, "output directory")->required();
  plan->add_option("--c-scale", c_scale, "override sigmoid scaling factor c");
  plan->add_option("--max-obstacles", max_obstacles, "override padded obstacle count");
  plan->add_option("--max-edges", max_edges, "override padded edge count");
  plan->add_option("--threshold", threshold, "override allowed-set threshold");
  plan->add_option("--horizon", horizon, "override prediction horizon");
  plan->add_flag("--disable-constraints", disable_constraints,
                 "run with the obstacle constraints inert");

  CLI::App* field = app.add_subcommand("field", "emit the constraint field only");
  field->add_option("--scenario", scenario, "scenario file")->required();
  field->add_option("--out", out_dir, "output directory")->required();

  CLI::App* extract = app.add_subcommand("extract", "extract polygons from a map");
  extract->add_option("--map", map_file, "map file")->required();
  extract->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (plan->parsed()) {
      return run_plan(scenario, out_dir, c_scale, max_obstacles, max_edges, threshold,
                      horizon, disable_constraints);
    }
    if (field->parsed()) return run_field(scenario, out_dir);
    if (extract->parsed()) return run_extract(map_file, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
