#include "mos/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mos {

using nlohmann::json;

bool Scenario::is_obstacle(const Cell& c) const {
  return std::binary_search(obstacles.begin(), obstacles.end(), c,
                            CellLess{grid_width});
}

OccupancyGrid Scenario::true_grid() const {
  OccupancyGrid g(grid_width, grid_height, resolution);
  std::fill(g.cells.begin(), g.cells.end(), Occupancy::Free);
  for (const Cell& c : obstacles) g.set(c, Occupancy::Obstacle);
  return g;
}

namespace {

Cell parse_cell(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ScenarioError(field, field + ": expected [x, y] integer pair");
  return Cell{j[0].get<int>(), j[1].get<int>()};
}

template <typename T>
T require(const json& j, const std::string& field) {
  if (!j.contains(field))
    throw ScenarioError(field, "missing required field '" + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError(field, "field '" + field + "': " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<document>", std::string("scenario parse error: ") + e.what());
  }

  Scenario s;
  s.grid_width = require<int>(j, "grid_width");
  s.grid_height = require<int>(j, "grid_height");
  s.resolution = require<double>(j, "resolution");
  s.seed = require<uint64_t>(j, "seed");

  const json& rs = j.contains("robot_start") ? j.at("robot_start")
                                             : throw ScenarioError("robot_start", "missing required field 'robot_start'");
  s.robot_start.x = require<double>(rs, "x");
  s.robot_start.y = require<double>(rs, "y");
  s.robot_start.heading = require<double>(rs, "heading");

  s.target_classes = require<std::vector<std::string>>(j, "target_classes");

  if (!j.contains("objects")) throw ScenarioError("objects", "missing required field 'objects'");
  for (const json& o : j.at("objects")) {
    ObjectInstance inst;
    inst.class_label = require<std::string>(o, "class");
    inst.cell = parse_cell(o.at("cell"), "objects.cell");
    s.object_instances.push_back(std::move(inst));
  }

  if (!j.contains("obstacles")) throw ScenarioError("obstacles", "missing required field 'obstacles'");
  for (const json& o : j.at("obstacles")) s.obstacles.push_back(parse_cell(o, "obstacles"));
  std::sort(s.obstacles.begin(), s.obstacles.end(), CellLess{s.grid_width});
  s.obstacles.erase(std::unique(s.obstacles.begin(), s.obstacles.end()), s.obstacles.end());

  if (j.contains("sensor")) {
    const json& sn = j.at("sensor");
    s.sensor.fov = require<double>(sn, "fov");
    s.sensor.view_range = require<double>(sn, "view_range");
    s.sensor.detect_range = require<double>(sn, "detect_range");
    s.sensor.miss_prob = require<double>(sn, "miss_prob");
  }
  if (j.contains("noise")) {
    const json& nn = j.at("noise");
    s.noise.scorer_sigma = require<double>(nn, "scorer_sigma");
    s.noise.scorer_noise_sd = require<double>(nn, "scorer_noise_sd");
    s.noise.ambient_score = require<double>(nn, "ambient_score");
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", "cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string save_scenario(const Scenario& s) {
  json j;
  j["grid_width"] = s.grid_width;
  j["grid_height"] = s.grid_height;
  j["resolution"] = s.resolution;
  j["seed"] = s.seed;
  j["robot_start"] = {{"x", s.robot_start.x}, {"y", s.robot_start.y}, {"heading", s.robot_start.heading}};
  j["target_classes"] = s.target_classes;
  j["objects"] = json::array();
  for (const ObjectInstance& o : s.object_instances)
    j["objects"].push_back({{"class", o.class_label}, {"cell", {o.cell.x, o.cell.y}}});
  j["obstacles"] = json::array();
  std::vector<Cell> obs = s.obstacles;
  std::sort(obs.begin(), obs.end(), CellLess{s.grid_width});
  for (const Cell& c : obs) j["obstacles"].push_back({c.x, c.y});
  j["sensor"] = {{"fov", s.sensor.fov},
                 {"view_range", s.sensor.view_range},
                 {"detect_range", s.sensor.detect_range},
                 {"miss_prob", s.sensor.miss_prob}};
  j["noise"] = {{"scorer_sigma", s.noise.scorer_sigma},
                {"scorer_noise_sd", s.noise.scorer_noise_sd},
                {"ambient_score", s.noise.ambient_score}};
  return j.dump(2) + "\n";
}

void save_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("<file>", "cannot write scenario file: " + path);
  out << save_scenario(s);
}

void validate_scenario(const Scenario& s) {
  if (s.grid_width <= 0 || s.grid_height <= 0)
    throw ScenarioError("grid_width", "grid dimensions must be positive");
  if (s.resolution <= 0.0)
    throw ScenarioError("resolution", "resolution must be positive");
  for (const Cell& c : s.obstacles)
    if (!s.in_bounds(c))
      throw ScenarioError("obstacles", "obstacle out of bounds at (" + std::to_string(c.x) +
                                           "," + std::to_string(c.y) + ")");

  const Cell start = s.cell_of(s.robot_start);
  if (!s.in_bounds(start))
    throw ScenarioError("robot_start", "robot_start outside the grid");
  if (s.is_obstacle(start))
    throw ScenarioError("robot_start", "robot_start lies on an obstacle cell");
  if (!(s.robot_start.heading >= 0.0 && s.robot_start.heading < 6.283185307179587))
    throw ScenarioError("robot_start.heading", "heading must be in [0, 2pi)");

  if (s.target_classes.empty())
    throw ScenarioError("target_classes", "at least one target class required");
  std::set<std::string> classes(s.target_classes.begin(), s.target_classes.end());
  if (classes.size() != s.target_classes.size())
    throw ScenarioError("target_classes", "duplicate target class");

  std::set<std::string> present;
  for (const ObjectInstance& o : s.object_instances) {
    if (!s.in_bounds(o.cell))
      throw ScenarioError("objects", "object '" + o.class_label + "' out of bounds");
    if (s.is_obstacle(o.cell))
      throw ScenarioError("objects", "object '" + o.class_label + "' placed on an obstacle cell");
    present.insert(o.class_label);
  }
  for (const std::string& t : s.target_classes)
    if (!present.count(t))
      throw ScenarioError("target_classes",
                          "target class '" + t + "' has no object instance");

  if (!(s.sensor.fov > 0.0 && s.sensor.fov <= 6.283185307179587))
    throw ScenarioError("sensor.fov", "fov must be in (0, 2pi]");
  if (s.sensor.view_range <= 0.0)
    throw ScenarioError("sensor.view_range", "view_range must be positive");
  if (s.sensor.detect_range > s.sensor.view_range)
    throw ScenarioError("sensor.detect_range", "detect_range must be <= view_range");
  if (!(s.sensor.miss_prob >= 0.0 && s.sensor.miss_prob < 1.0))
    throw ScenarioError("sensor.miss_prob", "miss_prob must be in [0, 1)");
  if (s.noise.scorer_sigma <= 0.0)
    throw ScenarioError("noise.scorer_sigma", "scorer_sigma must be positive");
  if (!(s.noise.ambient_score >= 0.0 && s.noise.ambient_score < 1.0))
    throw ScenarioError("noise.ambient_score", "ambient_score must be in [0, 1)");
  if (s.noise.scorer_noise_sd < 0.0)
    throw ScenarioError("noise.scorer_noise_sd", "scorer_noise_sd must be non-negative");
}

}  // namespace mos
