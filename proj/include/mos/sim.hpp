#pragma once

#include <map>
#include <string>
#include <vector>

#include "mos/grid.hpp"
#include "mos/scenario.hpp"

namespace mos {

struct Detection {
  std::string class_label;
  Cell cell;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// One sensing cycle: what the robot saw from a pose.
struct SensorFrame {
  Pose pose;
  std::vector<Cell> visible;        // free cells in view, sorted row-major
  std::vector<Cell> hit_obstacles;  // obstacle cells seen by ray or contact, sorted
  // Free cells in the robot's 8-neighbourhood that the view cone missed.
  // Proximity sensing feeds the occupancy map only — a robot parked next
  // to a wall knows it is there — and never detections or value painting.
  std::vector<Cell> proximity_free;
  std::vector<Detection> detections;
  std::map<std::string, double> scores;  // per queried class, in [0, 1]
};

// Normalize an angle to (-pi, pi].
double wrap_angle(double a);

// Free cells whose center lies within view_range of the pose, within
// fov/2 of the heading, and with unobstructed center-to-center line of
// sight. The robot's own cell is always visible.
std::vector<Cell> visible_cells(const Scenario& sc, const Pose& pose);

// Simulated perception. Detections: each visible instance of a queried
// class within detect_range is reported independently with probability
// 1 - miss_prob. Scores: per queried class, exp(-d/sigma) for the nearest
// visible instance (floored at ambient), ambient when none is visible,
// plus Gaussian noise, clipped to [0, 1]. All randomness is keyed by
// (scenario seed, stream, step, index) so frames are reproducible in
// isolation.
SensorFrame sense(const Scenario& sc, const Pose& pose, long step);
SensorFrame sense(const Scenario& sc, const Pose& pose, long step,
                  const std::vector<std::string>& classes);

struct AdvanceResult {
  Pose pose;
  double distance = 0.0;  // meters actually travelled
  long steps = 0;         // grid moves executed
  bool reached = false;
  bool no_path = false;
};

// Walk the shortest known-map path toward the waypoint, treating unknown
// cells as free. True obstacles are discovered on contact: the blocking
// cell is written into `known` and the path is replanned from the current
// cell at no cost. Stops after max_steps moves. The final heading points
// along the last executed move. A call with waypoint == current cell
// moves nothing (0 steps, 0 distance) and instead rotates the heading by
// one cone width so a parked robot still scans its surroundings.
AdvanceResult advance(const Scenario& sc, const Pose& pose, const Cell& waypoint,
                      OccupancyGrid& known, long max_steps);

}  // namespace mos
