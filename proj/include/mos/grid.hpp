#pragma once

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace mos {

struct Cell {
  int x = 0;  // column, west -> east
  int y = 0;  // row, row 0 = north

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Row-major ordering (y * width + x); the global tie-break order.
inline long row_major(const Cell& c, int width) {
  return static_cast<long>(c.y) * width + c.x;
}

struct CellLess {
  int width;
  bool operator()(const Cell& a, const Cell& b) const {
    return row_major(a, width) < row_major(b, width);
  }
};

enum class Occupancy : uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

// Ternary obstacle/free/unknown map; substrate for all other maps.
// A cell never loses information: Obstacle is terminal and Free may only
// be overwritten by Obstacle (which cannot happen in a static world).
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  double resolution = 1.0;  // meters per cell
  std::vector<Occupancy> cells;

  OccupancyGrid() = default;
  OccupancyGrid(int w, int h, double res)
      : width(w), height(h), resolution(res),
        cells(static_cast<size_t>(w) * h, Occupancy::Unknown) {}

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  size_t idx(const Cell& c) const {
    assert(in_bounds(c));
    return static_cast<size_t>(c.y) * width + c.x;
  }
  Occupancy at(const Cell& c) const { return cells[idx(c)]; }
  void set(const Cell& c, Occupancy o) {
    Occupancy& cur = cells[idx(c)];
    assert(!(cur == Occupancy::Obstacle && o != Occupancy::Obstacle));
    cur = o;
  }
  bool is_free(const Cell& c) const { return in_bounds(c) && at(c) == Occupancy::Free; }
  bool is_obstacle(const Cell& c) const { return in_bounds(c) && at(c) == Occupancy::Obstacle; }

  // Cell center in meters.
  double cx(const Cell& c) const { return (c.x + 0.5) * resolution; }
  double cy(const Cell& c) const { return (c.y + 0.5) * resolution; }

  Cell cell_of(double x_m, double y_m) const {
    return Cell{static_cast<int>(x_m / resolution), static_cast<int>(y_m / resolution)};
  }
};

// Dense per-cell scalar field aligned with an OccupancyGrid.
template <typename T>
struct Grid2D {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid2D() = default;
  Grid2D(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  T& at(const Cell& c) { return data[static_cast<size_t>(c.y) * width + c.x]; }
  const T& at(const Cell& c) const { return data[static_cast<size_t>(c.y) * width + c.x]; }
  T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return data.size(); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// All cells the closed segment between the two cell centers touches,
// in traversal order from a to b. Touching a corner point counts for
// every cell meeting at that corner. Exact: centers live on the odd
// integer lattice once coordinates are doubled, so every boundary
// crossing comparison is integer arithmetic.
std::vector<Cell> supercover(const Cell& a, const Cell& b);

}  // namespace mos
