#include "mos/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mos/nav.hpp"

namespace mos {

double decay_factor(double u, const DecayParams& p) {
  return 1.0 / (1.0 + std::exp((u - p.tau) / p.kappa));
}

Grid2D<int> combined_update_counts(const std::vector<ValueLayer>& layers) {
  if (layers.empty()) return {};
  Grid2D<int> u(layers.front().u.width, layers.front().u.height, 0);
  for (const ValueLayer& layer : layers)
    for (size_t i = 0; i < u.size(); ++i)
      u.data[i] = std::max(u.data[i], layer.u.data[i]);
  return u;
}

Grid2D<double> decayed_map(const SharedValueMap& shared, const Grid2D<int>& u_combined,
                           const DecayParams& p) {
  Grid2D<double> out(shared.v.width, shared.v.height, 0.0);
  for (size_t i = 0; i < out.size(); ++i)
    out.data[i] = shared.v.data[i] * decay_factor(u_combined.data[i], p);
  return out;
}

std::vector<int> dbscan_labels(const std::vector<Cell>& points, double eps, int min_pts) {
  const int n = static_cast<int>(points.size());
  const double eps2 = eps * eps;
  auto close = [&](int a, int b) {
    const double dx = points[a].x - points[b].x;
    const double dy = points[a].y - points[b].y;
    return dx * dx + dy * dy <= eps2;
  };
  auto neighborhood = [&](int i) {
    std::vector<int> nb;
    for (int j = 0; j < n; ++j)
      if (close(i, j)) nb.push_back(j);  // includes i itself
    return nb;
  };

  constexpr int kUndefined = -2, kNoise = -1;
  std::vector<int> label(n, kUndefined);
  int cluster_id = 0;

  for (int i = 0; i < n; ++i) {
    if (label[i] != kUndefined) continue;
    std::vector<int> nb = neighborhood(i);
    if (static_cast<int>(nb.size()) < min_pts) {
      label[i] = kNoise;
      continue;
    }
    const int c = cluster_id++;
    label[i] = c;
    std::deque<int> seeds(nb.begin(), nb.end());
    while (!seeds.empty()) {
      const int q = seeds.front();
      seeds.pop_front();
      if (label[q] == kNoise) label[q] = c;  // border point
      if (label[q] != kUndefined) continue;
      label[q] = c;
      std::vector<int> nq = neighborhood(q);
      if (static_cast<int>(nq.size()) >= min_pts)
        seeds.insert(seeds.end(), nq.begin(), nq.end());
    }
  }
  return label;
}

std::vector<Cell> cluster(const Grid2D<double>& v_decayed, const ClusterParams& p,
                          const OccupancyGrid& known) {
  std::vector<Cell> pts;
  for (int y = 0; y < v_decayed.height; ++y)
    for (int x = 0; x < v_decayed.width; ++x)
      if (v_decayed.at(x, y) >= p.value_threshold) pts.push_back({x, y});
  if (pts.empty()) return {};

  const std::vector<int> label = dbscan_labels(pts, p.eps, p.min_pts);
  const int n_clusters = 1 + *std::max_element(label.begin(), label.end());
  if (n_clusters <= 0) return {};

  std::vector<Cell> out;
  for (int c = 0; c < n_clusters; ++c) {
    double wx = 0.0, wy = 0.0, wsum = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (label[i] != c) continue;
      const double w = v_decayed.at(pts[i]);
      wx += w * pts[i].x;
      wy += w * pts[i].y;
      wsum += w;
    }
    if (wsum <= 0.0) continue;
    const double gx = wx / wsum, gy = wy / wsum;

    bool found = false;
    Cell best{};
    double best_d2 = 0.0;
    for (int y = 0; y < known.height; ++y)
      for (int x = 0; x < known.width; ++x) {
        if (known.at(Cell{x, y}) != Occupancy::Free) continue;
        const double dx = x - gx, dy = y - gy;
        const double d2 = dx * dx + dy * dy;
        if (!found || d2 < best_d2) {  // row-major scan order breaks ties
          found = true;
          best = Cell{x, y};
          best_d2 = d2;
        }
      }
    if (found && std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
  }
  return out;
}

std::vector<Cell> filter_reachable(const std::vector<Cell>& points,
                                   const OccupancyGrid& known, const Cell& robot) {
  std::vector<Cell> out;
  for (const Cell& c : points)
    if (shortest_path(known, robot, c, /*unknown_is_free=*/true)) out.push_back(c);
  return out;
}

std::optional<CandidateSet> build_candidates(const Grid2D<double>& v_decayed,
                                             const std::vector<Cell>& clusters,
                                             const FrontierSet& frontiers, int grid_width) {
  if (clusters.empty() && frontiers.frontiers.empty()) return std::nullopt;

  CandidateSet set;
  if (!clusters.empty()) {
    set.points = clusters;
    double sum = 0.0;
    for (const Cell& c : clusters) {
      const double w = std::max(v_decayed.at(c), 1e-12);
      set.probs.push_back(w);
      sum += w;
    }
    for (double& p : set.probs) p /= sum;
  }
  if (!frontiers.frontiers.empty()) {
    const Frontier* best = &frontiers.frontiers.front();
    for (const Frontier& f : frontiers.frontiers) {
      if (f.score > best->score ||
          (f.score == best->score &&
           row_major(f.cell, grid_width) < row_major(best->cell, grid_width)))
        best = &f;
    }
    set.frontier = best->cell;
  }
  return set;
}

}  // namespace mos
