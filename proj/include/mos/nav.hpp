#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mos/grid.hpp"

namespace mos {

// Exact 8-connected path cost: ortho steps cost 1, diagonal steps cost
// sqrt(2), both in cell units. Stored as the integer pair (ortho, diag)
// so equal-length paths compare equal and A* matches Dijkstra bitwise.
struct StepCost {
  long ortho = 0;
  long diag = 0;

  StepCost operator+(const StepCost& o) const { return {ortho + o.ortho, diag + o.diag}; }
  friend bool operator==(const StepCost&, const StepCost&) = default;

  // Exact sign of (ortho + diag*sqrt(2)) - (o.ortho + o.diag*sqrt(2)).
  int compare(const StepCost& o) const;
  bool operator<(const StepCost& o) const { return compare(o) < 0; }

  double meters(double resolution) const;
};

struct PathResult {
  std::vector<Cell> cells;  // from start to goal inclusive
  double length = 0.0;      // meters
  StepCost cost;            // exact length in cell units
};

struct UnreachableTarget : std::runtime_error {
  Cell target;
  UnreachableTarget(Cell t, const std::string& msg) : std::runtime_error(msg), target(t) {}
};

// Optimal 8-connected path. Diagonal moves are forbidden only when both
// adjacent orthogonal cells are blocked (no corner cutting). Unknown
// cells are traversable iff unknown_is_free.
std::optional<PathResult> shortest_path(const OccupancyGrid& grid, const Cell& from,
                                        const Cell& to, bool unknown_is_free);

// Reference search without a heuristic; same cost model, independent code.
std::optional<PathResult> dijkstra_path(const OccupancyGrid& grid, const Cell& from,
                                        const Cell& to, bool unknown_is_free);

// Minimum over target permutations of chained shortest-path lengths on
// the given grid (open tour). Throws UnreachableTarget.
double optimal_tour_length(const OccupancyGrid& true_grid, const Cell& start,
                           const std::vector<Cell>& targets);

}  // namespace mos
