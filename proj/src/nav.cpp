#include "mos/nav.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <utility>

namespace mos {

namespace {

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

bool passable(const OccupancyGrid& g, const Cell& c, bool unknown_is_free) {
  if (!g.in_bounds(c)) return false;
  const Occupancy o = g.at(c);
  return o == Occupancy::Free || (o == Occupancy::Unknown && unknown_is_free);
}

bool step_allowed(const OccupancyGrid& g, const Cell& from, int dir, bool unknown_is_free,
                  Cell& next) {
  next = Cell{from.x + kDx[dir], from.y + kDy[dir]};
  if (!passable(g, next, unknown_is_free)) return false;
  if (dir >= 4) {
    // No corner cutting: diagonal is forbidden when both adjacent
    // orthogonal cells are Obstacle.
    const Cell a{from.x + kDx[dir], from.y};
    const Cell b{from.x, from.y + kDy[dir]};
    if (g.is_obstacle(a) && g.is_obstacle(b)) return false;
  }
  return true;
}

StepCost step_cost(int dir) { return dir < 4 ? StepCost{1, 0} : StepCost{0, 1}; }

StepCost octile(const Cell& a, const Cell& b) {
  const long dx = std::labs(static_cast<long>(a.x) - b.x);
  const long dy = std::labs(static_cast<long>(a.y) - b.y);
  const long d = std::min(dx, dy);
  return StepCost{std::max(dx, dy) - d, d};
}

std::optional<PathResult> reconstruct(const OccupancyGrid& grid, const Cell& from,
                                      const Cell& to, const std::vector<int>& parent,
                                      const std::vector<StepCost>& dist) {
  PathResult r;
  r.cost = dist[grid.idx(to)];
  r.length = r.cost.meters(grid.resolution);
  Cell c = to;
  while (!(c == from)) {
    r.cells.push_back(c);
    const int p = parent[grid.idx(c)];
    c = Cell{p % grid.width, p / grid.width};
  }
  r.cells.push_back(from);
  std::reverse(r.cells.begin(), r.cells.end());
  return r;
}

}  // namespace

int StepCost::compare(const StepCost& o) const {
  const long long da = ortho - o.ortho;
  const long long db = diag - o.diag;
  if (da == 0 && db == 0) return 0;
  if (da >= 0 && db >= 0) return 1;
  if (da <= 0 && db <= 0) return -1;
  // Mixed signs: compare da^2 against 2*db^2 on the positive side.
  if (da > 0) {  // db < 0: positive iff da^2 > 2 db^2
    const long long l = da * da, r = 2 * db * db;
    return l > r ? 1 : (l < r ? -1 : 1);  // equality impossible (sqrt2 irrational, db != 0)
  }
  const long long l = 2 * db * db, r = da * da;  // da < 0, db > 0
  return l > r ? 1 : (l < r ? -1 : -1);
}

double StepCost::meters(double resolution) const {
  return (static_cast<double>(ortho) +
          static_cast<double>(diag) * 1.4142135623730950488016887242097) *
         resolution;
}

std::optional<PathResult> shortest_path(const OccupancyGrid& grid, const Cell& from,
                                        const Cell& to, bool unknown_is_free) {
  if (!grid.in_bounds(from) || !passable(grid, to, unknown_is_free)) return std::nullopt;
  if (from == to)
    return PathResult{{from}, 0.0, StepCost{}};

  struct Entry {
    StepCost f;
    long tie;
    Cell cell;
    StepCost g;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    const int c = a.f.compare(b.f);
    if (c != 0) return c > 0;
    return a.tie > b.tie;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  const size_t n = grid.cells.size();
  std::vector<StepCost> dist(n);
  std::vector<uint8_t> has_dist(n, 0), closed(n, 0);
  std::vector<int> parent(n, -1);

  dist[grid.idx(from)] = StepCost{};
  has_dist[grid.idx(from)] = 1;
  open.push({octile(from, to), row_major(from, grid.width), from, StepCost{}});

  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const size_t ci = grid.idx(e.cell);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (e.cell == to) return reconstruct(grid, from, to, parent, dist);

    for (int d = 0; d < 8; ++d) {
      Cell nb;
      if (!step_allowed(grid, e.cell, d, unknown_is_free, nb)) continue;
      const size_t ni = grid.idx(nb);
      if (closed[ni]) continue;
      const StepCost g = e.g + step_cost(d);
      if (!has_dist[ni] || g < dist[ni]) {
        dist[ni] = g;
        has_dist[ni] = 1;
        parent[ni] = static_cast<int>(ci);
        open.push({g + octile(nb, to), row_major(nb, grid.width), nb, g});
      }
    }
  }
  return std::nullopt;
}

std::optional<PathResult> dijkstra_path(const OccupancyGrid& grid, const Cell& from,
                                        const Cell& to, bool unknown_is_free) {
  if (!grid.in_bounds(from) || !passable(grid, to, unknown_is_free)) return std::nullopt;
  if (from == to) return PathResult{{from}, 0.0, StepCost{}};

  struct Entry {
    StepCost g;
    long tie;
    Cell cell;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    const int c = a.g.compare(b.g);
    if (c != 0) return c > 0;
    return a.tie > b.tie;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  const size_t n = grid.cells.size();
  std::vector<StepCost> dist(n);
  std::vector<uint8_t> has_dist(n, 0), done(n, 0);
  std::vector<int> parent(n, -1);

  dist[grid.idx(from)] = StepCost{};
  has_dist[grid.idx(from)] = 1;
  open.push({StepCost{}, row_major(from, grid.width), from});

  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const size_t ci = grid.idx(e.cell);
    if (done[ci]) continue;
    done[ci] = 1;
    if (e.cell == to) return reconstruct(grid, from, to, parent, dist);

    for (int d = 0; d < 8; ++d) {
      Cell nb;
      if (!step_allowed(grid, e.cell, d, unknown_is_free, nb)) continue;
      const size_t ni = grid.idx(nb);
      if (done[ni]) continue;
      const StepCost g = dist[ci] + step_cost(d);
      if (!has_dist[ni] || g < dist[ni]) {
        dist[ni] = g;
        has_dist[ni] = 1;
        parent[ni] = static_cast<int>(ci);
        open.push({g, row_major(nb, grid.width), nb});
      }
    }
  }
  return std::nullopt;
}

double optimal_tour_length(const OccupancyGrid& true_grid, const Cell& start,
                           const std::vector<Cell>& targets) {
  if (targets.empty()) return 0.0;
  if (targets.size() > 6)
    throw std::invalid_argument("optimal_tour_length supports at most 6 targets");

  const int m = static_cast<int>(targets.size());
  std::vector<Cell> nodes;
  nodes.push_back(start);
  nodes.insert(nodes.end(), targets.begin(), targets.end());

  std::map<std::pair<int, int>, StepCost> pair_cost;
  auto leg = [&](int i, int j) -> StepCost {
    const std::pair<int, int> key = std::minmax(i, j);
    auto it = pair_cost.find(key);
    if (it != pair_cost.end()) return it->second;
    const auto p = shortest_path(true_grid, nodes[key.first], nodes[key.second], false);
    if (!p)
      throw UnreachableTarget(nodes[j], "target (" + std::to_string(nodes[j].x) + "," +
                                            std::to_string(nodes[j].y) + ") unreachable");
    pair_cost[key] = p->cost;
    return p->cost;
  };

  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i + 1;

  bool have_best = false;
  StepCost best;
  do {
    StepCost total;
    int prev = 0;
    for (int idx : order) {
      total = total + leg(prev, idx);
      prev = idx;
    }
    if (!have_best || total < best) {
      best = total;
      have_best = true;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  return best.meters(true_grid.resolution);
}

}  // namespace mos
