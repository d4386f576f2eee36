#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mos/nav.hpp"
#include "mos/rng.hpp"

using namespace mos;

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

OccupancyGrid open_grid(int w, int h, double res) {
  OccupancyGrid g(w, h, res);
  std::fill(g.cells.begin(), g.cells.end(), Occupancy::Free);
  return g;
}

OccupancyGrid random_grid(int w, int h, double density, Prng& rng) {
  OccupancyGrid g = open_grid(w, h, 1.0);
  for (auto& c : g.cells)
    if (rng.uniform01() < density) c = Occupancy::Obstacle;
  return g;
}

Cell random_free(const OccupancyGrid& g, Prng& rng) {
  for (;;) {
    Cell c{int(rng.below(g.width)), int(rng.below(g.height))};
    if (g.is_free(c)) return c;
  }
}

// Closed-form 8-connected distance on an empty grid.
double octile_m(const Cell& a, const Cell& b, double res) {
  const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  const int d = std::min(dx, dy);
  return (std::max(dx, dy) - d + d * kSqrt2) * res;
}

// Structural check independent of the search: the returned cell list must
// be a legal walk under the movement rules and add up to the claimed cost.
void check_path_valid(const OccupancyGrid& g, const PathResult& r, const Cell& from,
                      const Cell& to) {
  REQUIRE(!r.cells.empty());
  CHECK(r.cells.front() == from);
  CHECK(r.cells.back() == to);
  StepCost total;
  for (size_t i = 0; i + 1 < r.cells.size(); ++i) {
    const Cell a = r.cells[i], b = r.cells[i + 1];
    const int dx = b.x - a.x, dy = b.y - a.y;
    CHECK(std::max(std::abs(dx), std::abs(dy)) == 1);
    CHECK_FALSE(g.is_obstacle(b));
    if (dx != 0 && dy != 0) {
      CHECK_FALSE((g.is_obstacle(Cell{a.x + dx, a.y}) && g.is_obstacle(Cell{a.x, a.y + dy})));
      total = total + StepCost{0, 1};
    } else {
      total = total + StepCost{1, 0};
    }
  }
  CHECK(total == r.cost);
  CHECK(r.length == doctest::Approx(r.cost.meters(g.resolution)));
}

}  // namespace

TEST_CASE("exact cost comparison never hits floating point") {
  CHECK(StepCost{3, 2}.compare(StepCost{3, 2}) == 0);
  // 5 < 3 + 2*sqrt(2) = 5.828...
  CHECK(StepCost{5, 0} < StepCost{3, 2});
  // 7 < 5*sqrt(2) = 7.071...
  CHECK(StepCost{7, 0} < StepCost{0, 5});
  CHECK_FALSE(StepCost{0, 5} < StepCost{7, 0});
  CHECK(StepCost{2, 3}.meters(0.5) == doctest::Approx((2 + 3 * kSqrt2) * 0.5));
}

TEST_CASE("degenerate and straight-line paths") {
  const OccupancyGrid g = open_grid(10, 10, 0.25);
  SUBCASE("from equals to") {
    const auto r = shortest_path(g, Cell{4, 4}, Cell{4, 4}, false);
    REQUIRE(r.has_value());
    CHECK(r->cells == std::vector<Cell>{Cell{4, 4}});
    CHECK(r->length == 0.0);
    CHECK(r->cost == StepCost{});
  }
  SUBCASE("open corner-to-corner is a pure diagonal") {
    const auto r = shortest_path(g, Cell{0, 0}, Cell{9, 9}, false);
    REQUIRE(r.has_value());
    CHECK(r->cost == StepCost{0, 9});
    CHECK(r->length == doctest::Approx(9 * kSqrt2 * 0.25));
    check_path_valid(g, *r, Cell{0, 0}, Cell{9, 9});
  }
}

TEST_CASE("corner cutting is forbidden exactly when both orthogonals block") {
  OccupancyGrid g = open_grid(3, 3, 1.0);
  g.set(Cell{1, 0}, Occupancy::Obstacle);
  g.set(Cell{0, 1}, Occupancy::Obstacle);
  // Start is boxed in: the only exit would cut the blocked corner.
  CHECK_FALSE(shortest_path(g, Cell{0, 0}, Cell{1, 1}, false).has_value());

  OccupancyGrid h = open_grid(3, 3, 1.0);
  h.set(Cell{1, 0}, Occupancy::Obstacle);
  // One orthogonal free: the diagonal squeaks through.
  const auto r = shortest_path(h, Cell{0, 0}, Cell{1, 1}, false);
  REQUIRE(r.has_value());
  CHECK(r->cost == StepCost{0, 1});
}

TEST_CASE("unknown cells traversable only when the flag says so") {
  OccupancyGrid g(5, 1, 1.0);  // all Unknown
  g.set(Cell{0, 0}, Occupancy::Free);
  g.set(Cell{4, 0}, Occupancy::Free);
  CHECK_FALSE(shortest_path(g, Cell{0, 0}, Cell{4, 0}, false).has_value());
  const auto r = shortest_path(g, Cell{0, 0}, Cell{4, 0}, true);
  REQUIRE(r.has_value());
  CHECK(r->cost == StepCost{4, 0});
}

TEST_CASE("search matches the reference on random grids") {
  Prng rng{20240517ULL};
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const OccupancyGrid g = random_grid(18, 14, 0.25, rng);
    Cell from, to;
    bool found = false;
    for (int tries = 0; tries < 50 && !found; ++tries) {
      from = Cell{int(rng.below(g.width)), int(rng.below(g.height))};
      to = Cell{int(rng.below(g.width)), int(rng.below(g.height))};
      found = g.is_free(from) && g.is_free(to);
    }
    if (!found) continue;
    const auto a = shortest_path(g, from, to, false);
    const auto d = dijkstra_path(g, from, to, false);
    REQUIRE(a.has_value() == d.has_value());
    if (a.has_value()) {
      CHECK(a->cost == d->cost);
      CHECK(a->length == doctest::Approx(d->length));
      check_path_valid(g, *a, from, to);
      check_path_valid(g, *d, from, to);
      ++compared;
    }
  }
  CHECK(compared > 40);  // the sweep must actually exercise real paths
}

TEST_CASE("metric properties on a random grid") {
  Prng rng{99ULL};
  const OccupancyGrid g = random_grid(16, 16, 0.2, rng);
  for (int i = 0; i < 30; ++i) {
    const Cell a = random_free(g, rng), b = random_free(g, rng), c = random_free(g, rng);
    const auto ab = shortest_path(g, a, b, false);
    const auto ba = shortest_path(g, b, a, false);
    REQUIRE(ab.has_value() == ba.has_value());
    if (!ab) continue;
    CHECK(ab->cost == ba->cost);
    const auto ac = shortest_path(g, a, c, false);
    const auto bc = shortest_path(g, b, c, false);
    if (ac && bc) CHECK(ac->length <= ab->length + bc->length + 1e-9);
  }
}

TEST_CASE("tour length matches the closed form on empty grids") {
  const OccupancyGrid g = open_grid(30, 30, 0.25);
  Prng rng{7ULL};
  for (int trial = 0; trial < 20; ++trial) {
    const Cell start = random_free(g, rng);
    std::vector<Cell> targets;
    for (int k = 0; k < 3; ++k) targets.push_back(random_free(g, rng));

    // Independent oracle: chain octile distances, minimize over orders.
    std::vector<int> order{0, 1, 2};
    std::sort(order.begin(), order.end());
    double best = 1e300;
    do {
      double len = octile_m(start, targets[order[0]], g.resolution);
      len += octile_m(targets[order[0]], targets[order[1]], g.resolution);
      len += octile_m(targets[order[1]], targets[order[2]], g.resolution);
      best = std::min(best, len);
    } while (std::next_permutation(order.begin(), order.end()));

    CHECK(optimal_tour_length(g, start, targets) == doctest::Approx(best));
  }
}

TEST_CASE("tour on an obstacle map equals a permutation recomputation") {
  // Fixed 20x20 layout with a wall that forces detours.
  OccupancyGrid g = open_grid(20, 20, 0.25);
  for (int y = 0; y < 15; ++y) g.set(Cell{10, y}, Occupancy::Obstacle);
  for (int x = 3; x < 18; ++x) g.set(Cell{x, 17}, Occupancy::Obstacle);
  const Cell start{1, 1};
  const std::vector<Cell> targets{Cell{18, 2}, Cell{2, 19}, Cell{15, 12}};

  auto leg = [&](const Cell& a, const Cell& b) {
    const auto r = dijkstra_path(g, a, b, false);
    REQUIRE(r.has_value());
    return r->length;
  };
  std::vector<int> order{0, 1, 2};
  double best = 1e300;
  do {
    const double len = leg(start, targets[order[0]]) +
                       leg(targets[order[0]], targets[order[1]]) +
                       leg(targets[order[1]], targets[order[2]]);
    best = std::min(best, len);
  } while (std::next_permutation(order.begin(), order.end()));

  CHECK(optimal_tour_length(g, start, targets) == doctest::Approx(best));
}

TEST_CASE("tour is never beaten by greedy nearest-neighbor") {
  Prng rng{314ULL};
  for (int trial = 0; trial < 10; ++trial) {
    const OccupancyGrid g = random_grid(15, 15, 0.15, rng);
    const Cell start = random_free(g, rng);
    std::vector<Cell> targets;
    for (int k = 0; k < 3; ++k) targets.push_back(random_free(g, rng));
    const bool all_reachable = std::all_of(targets.begin(), targets.end(), [&](const Cell& t) {
      return shortest_path(g, start, t, false).has_value();
    });
    if (!all_reachable) continue;

    double greedy = 0.0;
    Cell at = start;
    std::vector<Cell> left = targets;
    bool ok = true;
    while (!left.empty() && ok) {
      size_t pick = 0;
      double best = 1e300;
      for (size_t i = 0; i < left.size(); ++i) {
        const auto r = shortest_path(g, at, left[i], false);
        if (!r) { ok = false; break; }
        if (r->length < best) { best = r->length; pick = i; }
      }
      if (!ok) break;
      greedy += best;
      at = left[pick];
      left.erase(left.begin() + pick);
    }
    if (!ok) continue;
    CHECK(optimal_tour_length(g, start, targets) <= greedy + 1e-9);
  }
}

TEST_CASE("tour errors") {
  OccupancyGrid g = open_grid(8, 8, 1.0);
  SUBCASE("single target reduces to shortest path") {
    const auto r = shortest_path(g, Cell{0, 0}, Cell{5, 2}, false);
    CHECK(optimal_tour_length(g, Cell{0, 0}, {Cell{5, 2}}) == doctest::Approx(r->length));
  }
  SUBCASE("unreachable target is identified") {
    for (int y = 0; y < 8; ++y) g.set(Cell{6, y}, Occupancy::Obstacle);
    try {
      optimal_tour_length(g, Cell{0, 0}, {Cell{7, 3}});
      FAIL("expected UnreachableTarget");
    } catch (const UnreachableTarget& e) {
      CHECK(e.target == Cell{7, 3});
    }
  }
  SUBCASE("more than six targets rejected") {
    std::vector<Cell> many(7, Cell{1, 1});
    CHECK_THROWS_AS(optimal_tour_length(g, Cell{0, 0}, many), std::invalid_argument);
  }
}
