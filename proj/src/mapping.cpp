#include "mos/mapping.hpp"

#include <algorithm>
#include <cmath>

namespace mos {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool ObjectMap::record(const std::string& class_label, const Cell& cell, long step) {
  std::vector<ObjectSighting>& list = entries[class_label];
  for (const ObjectSighting& s : list)
    if (s.cell == cell) return false;
  list.push_back({cell, step});
  return true;
}

void ObjectMap::record_detections(const SensorFrame& frame, long step) {
  for (const Detection& d : frame.detections) record(d.class_label, d.cell, step);
}

std::optional<double> cone_confidence(double bearing_offset, double fov) {
  const double half = fov * 0.5;
  if (std::fabs(bearing_offset) > half) return std::nullopt;
  const double c = std::cos((bearing_offset / half) * (kPi * 0.5));
  return c * c;
}

std::optional<std::pair<double, double>> fuse_cell(double v_curr, double c_curr,
                                                   double v_prev, double c_prev) {
  const double cs = c_curr + c_prev;
  if (cs <= 0.0) return std::nullopt;
  const double v = (c_curr * v_curr + c_prev * v_prev) / cs;
  const double c = (c_curr * c_curr + c_prev * c_prev) / cs;
  return std::make_pair(v, c);
}

void update_layers(std::vector<ValueLayer>& layers, const SensorFrame& frame, double fov,
                   double resolution) {
  for (ValueLayer& layer : layers) {
    const auto it = frame.scores.find(layer.target_class);
    if (it == frame.scores.end()) continue;
    const double score = it->second;

    for (const Cell& cell : frame.visible) {
      const double dx = (cell.x + 0.5) * resolution - frame.pose.x;
      const double dy = (cell.y + 0.5) * resolution - frame.pose.y;
      // The robot's own cell sits dead ahead by convention.
      const double offset = (dx == 0.0 && dy == 0.0)
                                ? 0.0
                                : wrap_angle(std::atan2(dy, dx) - frame.pose.heading);
      const auto conf = cone_confidence(offset, fov);
      if (!conf) continue;
      const auto fused = fuse_cell(score, *conf, layer.v.at(cell), layer.c.at(cell));
      if (!fused) continue;
      layer.v.at(cell) = fused->first;
      layer.c.at(cell) = fused->second;
      layer.u.at(cell) += 1;
    }
  }
}

void update_obstacles(OccupancyGrid& grid, const SensorFrame& frame) {
  for (const Cell& cell : frame.visible) grid.set(cell, Occupancy::Free);
  for (const Cell& cell : frame.proximity_free) grid.set(cell, Occupancy::Free);
  for (const Cell& cell : frame.hit_obstacles) grid.set(cell, Occupancy::Obstacle);
}

namespace {

bool is_frontier_cell(const OccupancyGrid& grid, const Cell& c) {
  if (grid.at(c) != Occupancy::Free) return false;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell nb{c.x + dx, c.y + dy};
      if (grid.in_bounds(nb) && grid.at(nb) == Occupancy::Unknown) return true;
    }
  return false;
}

}  // namespace

FrontierSet extract_frontiers(const OccupancyGrid& grid, const SharedValueMap& shared,
                              int min_frontier_len) {
  Grid2D<uint8_t> mark(grid.width, grid.height, 0);  // 1 = frontier, 2 = consumed
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      if (is_frontier_cell(grid, Cell{x, y})) mark.at(x, y) = 1;

  auto neighbors = [&](const Cell& c, auto&& fn) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{c.x + dx, c.y + dy};
        if (grid.in_bounds(nb)) fn(nb);
      }
  };

  FrontierSet out;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (mark.at(x, y) != 1) continue;

      // Collect the 8-connected component, lowest row-major first.
      std::vector<Cell> comp;
      std::vector<Cell> stack{Cell{x, y}};
      mark.at(x, y) = 2;
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        comp.push_back(c);
        neighbors(c, [&](const Cell& nb) {
          if (mark.at(nb) == 1) {
            mark.at(nb) = 2;
            stack.push_back(nb);
          }
        });
      }
      if (static_cast<int>(comp.size()) < min_frontier_len) continue;

      std::sort(comp.begin(), comp.end(),
                [&](const Cell& a, const Cell& b) {
                  return row_major(a, grid.width) < row_major(b, grid.width);
                });

      // Chain order: depth-first from the lowest row-major endpoint
      // (degree <= 1 within the component), falling back to the lowest
      // row-major cell, always preferring lower row-major neighbors.
      Grid2D<uint8_t> in_comp(grid.width, grid.height, 0);
      for (const Cell& c : comp) in_comp.at(c) = 1;
      auto degree = [&](const Cell& c) {
        int d = 0;
        neighbors(c, [&](const Cell& nb) { d += in_comp.at(nb); });
        return d;
      };
      Cell start = comp.front();
      for (const Cell& c : comp)
        if (degree(c) <= 1) {
          start = c;
          break;
        }

      std::vector<Cell> chain;
      Grid2D<uint8_t> seen(grid.width, grid.height, 0);
      std::vector<Cell> dfs{start};
      seen.at(start) = 1;
      while (!dfs.empty()) {
        const Cell c = dfs.back();
        dfs.pop_back();
        chain.push_back(c);
        std::vector<Cell> next;
        neighbors(c, [&](const Cell& nb) {
          if (in_comp.at(nb) && !seen.at(nb)) next.push_back(nb);
        });
        std::sort(next.begin(), next.end(), [&](const Cell& a, const Cell& b) {
          return row_major(a, grid.width) > row_major(b, grid.width);
        });
        for (const Cell& nb : next) {
          seen.at(nb) = 1;
          dfs.push_back(nb);
        }
      }

      double sum = 0.0;
      for (const Cell& c : comp) sum += shared.v.at(c);
      out.frontiers.push_back({chain[(chain.size() - 1) / 2],
                               sum / static_cast<double>(comp.size())});
    }
  }
  return out;
}

SharedValueMap aggregate_layers(const std::vector<ValueLayer>& layers) {
  SharedValueMap shared;
  if (layers.empty()) return shared;
  const int w = layers.front().v.width, h = layers.front().v.height;
  shared.v = Grid2D<double>(w, h, 0.0);
  Grid2D<int> contributors(w, h, 0);

  // Ranges below this are rounding dust, not signal: fusing the same score
  // into a cell repeatedly drifts v by an ulp or two, and min-max would
  // amplify that into full-range structure. Scores live in [0, 1], so an
  // absolute cutoff is safe.
  constexpr double kFlatRange = 1e-9;

  for (const ValueLayer& layer : layers) {
    shared.contributing_classes.push_back(layer.target_class);
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (size_t i = 0; i < layer.v.size(); ++i) {
      if (layer.u.data[i] <= 0) continue;
      const double v = layer.v.data[i];
      if (!any || v < lo) lo = v;
      if (!any || v > hi) hi = v;
      any = true;
    }
    if (!any) continue;
    const bool flat = hi - lo <= kFlatRange;
    for (size_t i = 0; i < layer.v.size(); ++i) {
      if (layer.u.data[i] <= 0) continue;
      const double norm = flat ? 0.5 : (layer.v.data[i] - lo) / (hi - lo);
      shared.v.data[i] += norm;
      contributors.data[i] += 1;
    }
  }
  for (size_t i = 0; i < shared.v.size(); ++i)
    if (contributors.data[i] > 0) shared.v.data[i] /= contributors.data[i];
  return shared;
}

}  // namespace mos
