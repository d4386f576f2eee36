#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mos/grid.hpp"

namespace mos {

struct Pose {
  double x = 0.0;        // meters
  double y = 0.0;        // meters
  double heading = 0.0;  // radians in [0, 2pi)

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct SensorSpec {
  double fov = 2.0943951023931953;  // radians, horizontal cone
  double view_range = 5.0;          // meters, score/visibility radius
  double detect_range = 3.0;        // meters, detector radius
  double miss_prob = 0.3;           // per visible instance per step

  friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

struct NoiseSpec {
  double scorer_sigma = 6.0;     // meters, distance falloff of the scorer
  double scorer_noise_sd = 0.05;
  double ambient_score = 0.1;    // score floor when nothing relevant is visible

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct ObjectInstance {
  std::string class_label;
  Cell cell;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

// Immutable after load; shareable across threads.
struct Scenario {
  int grid_width = 0;
  int grid_height = 0;
  double resolution = 0.25;  // meters per cell
  std::vector<Cell> obstacles;  // sorted row-major
  std::vector<ObjectInstance> object_instances;
  std::vector<std::string> target_classes;
  Pose robot_start;
  uint64_t seed = 0;
  SensorSpec sensor;
  NoiseSpec noise;

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.x < grid_width && c.y >= 0 && c.y < grid_height;
  }
  Cell cell_of(const Pose& p) const {
    return Cell{static_cast<int>(p.x / resolution), static_cast<int>(p.y / resolution)};
  }
  Cell cell_of(double x_m, double y_m) const {
    return Cell{static_cast<int>(x_m / resolution), static_cast<int>(y_m / resolution)};
  }
  double center_x(const Cell& c) const { return (c.x + 0.5) * resolution; }
  double center_y(const Cell& c) const { return (c.y + 0.5) * resolution; }
  Pose center_pose(const Cell& c, double heading = 0.0) const {
    return Pose{center_x(c), center_y(c), heading};
  }
  bool is_obstacle(const Cell& c) const;

  // The ground-truth grid: every non-obstacle cell is Free.
  OccupancyGrid true_grid() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioError : std::runtime_error {
  std::string field;
  ScenarioError(std::string f, const std::string& msg)
      : std::runtime_error(msg), field(std::move(f)) {}
};

// Parse and validate a scenario document (JSON, schema in README).
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string save_scenario(const Scenario& s);
void save_scenario_file(const Scenario& s, const std::string& path);

// Throws ScenarioError naming the offending field.
void validate_scenario(const Scenario& s);

}  // namespace mos
