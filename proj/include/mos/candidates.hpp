#pragma once

#include <optional>
#include <vector>

#include "mos/grid.hpp"
#include "mos/mapping.hpp"

namespace mos {

struct DecayParams {
  double tau = 15.0;   // update count at which value halves
  double kappa = 3.0;  // softness of the sigmoid, > 0
};

struct ClusterParams {
  double eps = 3.0;             // neighborhood radius in cells
  int min_pts = 4;              // core point threshold
  double value_threshold = 0.5; // post-normalization cut for cluster points
};

// Discrete belief over candidate points plus the best frontier.
struct CandidateSet {
  std::vector<Cell> points;
  std::vector<double> probs;  // same length, positive, sums to 1
  std::optional<Cell> frontier;
};

// 1 / (1 + exp((u - tau)/kappa)): ~1 for rarely-seen cells, 0.5 at tau,
// ~0 for heavily observed ones.
double decay_factor(double u, const DecayParams& p);

// Per-cell max of the remaining layers' update counts.
Grid2D<int> combined_update_counts(const std::vector<ValueLayer>& layers);

// v' = v_shared * decay_factor(u_combined).
Grid2D<double> decayed_map(const SharedValueMap& shared, const Grid2D<int>& u_combined,
                           const DecayParams& p);

// Classic DBSCAN over the given points (Euclidean distance, neighborhood
// includes the point itself). Returns one label per point: cluster ids
// from 0 in discovery order, -1 for noise. Deterministic for a given
// input order; border points go to the first cluster that reaches them,
// so callers pass points in row-major order to make that canonical.
std::vector<int> dbscan_labels(const std::vector<Cell>& points, double eps, int min_pts);

// Threshold the decayed map, cluster the surviving cells, and return each
// cluster's value-weighted centroid snapped to the nearest Free cell of
// the known grid (ties toward the lowest row-major cell). Duplicate
// snap targets are dropped.
std::vector<Cell> cluster(const Grid2D<double>& v_decayed, const ClusterParams& p,
                          const OccupancyGrid& known);

// Drop candidates with no traversable path from the robot cell (unknown
// cells count as traversable, matching how paths are executed).
std::vector<Cell> filter_reachable(const std::vector<Cell>& points,
                                   const OccupancyGrid& known, const Cell& robot);

// Belief over candidate points: p_i proportional to the decayed value at
// the point (floored at a tiny positive weight so every point keeps mass),
// plus the best-scoring frontier (ties toward the lowest row-major cell).
// nullopt = nothing left to pursue (exploration exhausted).
std::optional<CandidateSet> build_candidates(const Grid2D<double>& v_decayed,
                                             const std::vector<Cell>& clusters,
                                             const FrontierSet& frontiers, int grid_width);

}  // namespace mos
