#include "mos/sim.hpp"

#include <algorithm>
#include <cmath>

#include "mos/nav.hpp"
#include "mos/rng.hpp"

namespace mos {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

// No true obstacle strictly between the two cell centers.
bool los_clear(const OccupancyGrid& truth, const Cell& from, const Cell& to) {
  const std::vector<Cell> ray = supercover(from, to);
  for (size_t i = 1; i + 1 < ray.size(); ++i)
    if (truth.at(ray[i]) == Occupancy::Obstacle) return false;
  return true;
}

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

namespace {

struct ViewScan {
  std::vector<Cell> free_cells;      // row-major, cone + line of sight
  std::vector<Cell> hit_obstacles;   // row-major
  std::vector<Cell> proximity_free;  // row-major, 8-neighbourhood fallback
};

ViewScan scan_view(const Scenario& sc, const Pose& pose) {
  const OccupancyGrid truth = sc.true_grid();
  const Cell robot = sc.cell_of(pose.x, pose.y);
  const double half_fov = sc.sensor.fov * 0.5;

  ViewScan out;
  for (int y = 0; y < sc.grid_height; ++y) {
    for (int x = 0; x < sc.grid_width; ++x) {
      const Cell c{x, y};
      if (c == robot) {
        out.free_cells.push_back(c);
        continue;
      }
      const bool adjacent = std::abs(c.x - robot.x) <= 1 && std::abs(c.y - robot.y) <= 1;
      const double dx = sc.center_x(c) - pose.x;
      const double dy = sc.center_y(c) - pose.y;
      const bool in_cone =
          std::hypot(dx, dy) <= sc.sensor.view_range &&
          std::fabs(wrap_angle(std::atan2(dy, dx) - pose.heading)) <= half_fov &&
          los_clear(truth, robot, c);
      if (!in_cone && !adjacent) continue;
      if (truth.at(c) == Occupancy::Obstacle)
        out.hit_obstacles.push_back(c);
      else if (in_cone)
        out.free_cells.push_back(c);
      else
        out.proximity_free.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<Cell> visible_cells(const Scenario& sc, const Pose& pose) {
  return scan_view(sc, pose).free_cells;
}

SensorFrame sense(const Scenario& sc, const Pose& pose, long step) {
  return sense(sc, pose, step, sc.target_classes);
}

SensorFrame sense(const Scenario& sc, const Pose& pose, long step,
                  const std::vector<std::string>& classes) {
  SensorFrame frame;
  frame.pose = pose;
  ViewScan scan = scan_view(sc, pose);
  frame.visible = std::move(scan.free_cells);
  frame.hit_obstacles = std::move(scan.hit_obstacles);
  frame.proximity_free = std::move(scan.proximity_free);

  const CellLess less{sc.grid_width};
  auto in_view = [&](const Cell& c) {
    return std::binary_search(frame.visible.begin(), frame.visible.end(), c, less);
  };
  auto dist_to = [&](const Cell& c) {
    return std::hypot(sc.center_x(c) - pose.x, sc.center_y(c) - pose.y);
  };
  auto queried = [&](const std::string& k) {
    return std::find(classes.begin(), classes.end(), k) != classes.end();
  };

  constexpr uint64_t kDetector = stream_tag("detector");
  for (size_t i = 0; i < sc.object_instances.size(); ++i) {
    const ObjectInstance& obj = sc.object_instances[i];
    if (!queried(obj.class_label)) continue;
    if (!in_view(obj.cell) || dist_to(obj.cell) > sc.sensor.detect_range) continue;
    const double u = keyed_uniform01(sc.seed, kDetector, static_cast<uint64_t>(step), i);
    if (u < 1.0 - sc.sensor.miss_prob) frame.detections.push_back({obj.class_label, obj.cell});
  }

  constexpr uint64_t kScorer = stream_tag("scorer");
  for (const std::string& k : classes) {
    double best = -1.0;
    for (const ObjectInstance& obj : sc.object_instances) {
      if (obj.class_label != k || !in_view(obj.cell)) continue;
      const double d = dist_to(obj.cell);
      if (best < 0.0 || d < best) best = d;
    }
    double raw = sc.noise.ambient_score;
    if (best >= 0.0)
      raw = std::max(std::exp(-best / sc.noise.scorer_sigma), sc.noise.ambient_score);
    const double noise = keyed_normal(sc.seed, kScorer, static_cast<uint64_t>(step),
                                      stream_tag(k), 0.0, sc.noise.scorer_noise_sd);
    frame.scores[k] = clip01(raw + noise);
  }
  return frame;
}

AdvanceResult advance(const Scenario& sc, const Pose& pose, const Cell& waypoint,
                      OccupancyGrid& known, long max_steps) {
  AdvanceResult res;
  res.pose = pose;

  Cell cur = sc.cell_of(pose.x, pose.y);
  if (cur == waypoint) {
    // Already there: scan in place instead. Turning one cone width per
    // call sweeps the full circle over a few cycles, so a robot parked on
    // its own goal still uncovers the cells behind it.
    res.reached = true;
    double h = pose.heading + std::min(sc.sensor.fov, kPi * 0.5);
    h = std::fmod(h, 2.0 * kPi);
    if (h < 0.0) h += 2.0 * kPi;
    res.pose.heading = h;
    return res;
  }

  const OccupancyGrid truth = sc.true_grid();
  StepCost travelled;
  double last_dx = 0.0, last_dy = 0.0;

  while (res.steps < max_steps && !(cur == waypoint)) {
    const auto path = shortest_path(known, cur, waypoint, /*unknown_is_free=*/true);
    if (!path) {
      res.no_path = true;
      break;
    }
    bool replanned = false;
    for (size_t i = 1; i < path->cells.size() && res.steps < max_steps; ++i) {
      const Cell next = path->cells[i];
      if (truth.at(next) == Occupancy::Obstacle) {
        known.set(next, Occupancy::Obstacle);  // discovered on contact, no step spent
        replanned = true;
        break;
      }
      const bool diagonal = next.x != cur.x && next.y != cur.y;
      travelled = travelled + (diagonal ? StepCost{0, 1} : StepCost{1, 0});
      last_dx = static_cast<double>(next.x - cur.x);
      last_dy = static_cast<double>(next.y - cur.y);
      cur = next;
      ++res.steps;
    }
    if (!replanned && !(cur == waypoint)) break;  // step budget exhausted mid-path
  }

  res.reached = cur == waypoint;
  res.distance = travelled.meters(sc.resolution);
  res.pose = sc.center_pose(cur, pose.heading);
  if (res.steps > 0) {
    double h = std::atan2(last_dy, last_dx);
    if (h < 0.0) h += 2.0 * kPi;
    res.pose.heading = h;
  }
  return res;
}

}  // namespace mos
