#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mos/grid.hpp"
#include "mos/sim.hpp"

namespace mos {

// Per-target-class value map: value v, confidence c, update count u.
struct ValueLayer {
  std::string target_class;
  Grid2D<double> v;
  Grid2D<double> c;
  Grid2D<int> u;

  ValueLayer() = default;
  ValueLayer(std::string cls, int w, int h)
      : target_class(std::move(cls)), v(w, h, 0.0), c(w, h, 0.0), u(w, h, 0) {}
};

struct SharedValueMap {
  Grid2D<double> v;
  std::vector<std::string> contributing_classes;
};

struct ObjectSighting {
  Cell cell;
  long first_seen_step = 0;
};

// Every confirmed detection ever made, one entry per (class, cell),
// never removed.
struct ObjectMap {
  std::map<std::string, std::vector<ObjectSighting>> entries;

  // Returns true when the (class, cell) pair is new.
  bool record(const std::string& class_label, const Cell& cell, long step);
  void record_detections(const SensorFrame& frame, long step);
};

struct Frontier {
  Cell cell;     // chain midpoint
  double score;  // mean shared value over the chain
};

struct FrontierSet {
  std::vector<Frontier> frontiers;
};

// Angular confidence falloff across the sensing cone; nullopt outside it.
std::optional<double> cone_confidence(double bearing_offset, double fov);

// Confidence-weighted value fusion. nullopt = no-update (both confidences
// zero); the caller leaves the cell untouched.
std::optional<std::pair<double, double>> fuse_cell(double v_curr, double c_curr,
                                                   double v_prev, double c_prev);

// Paint the frame's per-class score onto every visible cell of the
// matching layer, weighted by the angular confidence, and bump u.
void update_layers(std::vector<ValueLayer>& layers, const SensorFrame& frame, double fov,
                   double resolution);

// Write what the frame saw into the known grid: visible free cells and
// the obstacle cells its rays terminated on.
void update_obstacles(OccupancyGrid& grid, const SensorFrame& frame);

// Frontier = Free cell 8-adjacent to an Unknown cell (map edges do not
// count as unknown). Maximal 8-connected components become chains:
// traversal starts at the lowest row-major endpoint (lowest row-major
// cell if the component has no endpoint) and proceeds depth-first,
// visiting lower row-major neighbors first. The midpoint is element
// (len-1)/2 of that order. Components shorter than min_frontier_len are
// dropped.
FrontierSet extract_frontiers(const OccupancyGrid& grid, const SharedValueMap& shared,
                              int min_frontier_len);

// Min-max normalize each layer over its observed (u>0) cells — a flat
// layer (range within rounding dust) normalizes to 0.5 — then average per
// cell across the layers that observed it. Cells observed by no layer
// stay 0.
SharedValueMap aggregate_layers(const std::vector<ValueLayer>& layers);

}  // namespace mos
