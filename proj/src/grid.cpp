#include "mos/grid.hpp"

#include <cmath>

namespace mos {

std::vector<Cell> supercover(const Cell& a, const Cell& b) {
  std::vector<Cell> out;
  out.push_back(a);
  if (a == b) return out;

  // Doubled coordinates: center of cell (x,y) is (2x+1, 2y+1).
  const long long p0x = 2LL * a.x + 1, p0y = 2LL * a.y + 1;
  const long long p1x = 2LL * b.x + 1, p1y = 2LL * b.y + 1;
  const long long dx = p1x - p0x, dy = p1y - p0y;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const long long adx = std::llabs(dx), ady = std::llabs(dy);

  int cx = a.x, cy = a.y;
  // Distances (in doubled units) from p0 to the next vertical/horizontal
  // cell boundary along the direction of travel.
  long long bx = sx != 0 ? 1 : 0;  // first boundary is 1 unit away from an odd center
  long long by = sy != 0 ? 1 : 0;

  while (cx != b.x || cy != b.y) {
    if (sx == 0) {
      cy += sy;
      out.push_back({cx, cy});
      continue;
    }
    if (sy == 0) {
      cx += sx;
      out.push_back({cx, cy});
      continue;
    }
    // Compare crossing parameters bx/adx vs by/ady exactly.
    const long long lhs = bx * ady, rhs = by * adx;
    if (lhs < rhs) {
      cx += sx;
      bx += 2;
      out.push_back({cx, cy});
    } else if (lhs > rhs) {
      cy += sy;
      by += 2;
      out.push_back({cx, cy});
    } else {
      // Exact corner crossing: the segment touches both side cells.
      out.push_back({cx + sx, cy});
      out.push_back({cx, cy + sy});
      cx += sx;
      cy += sy;
      bx += 2;
      by += 2;
      out.push_back({cx, cy});
    }
  }
  return out;
}

}  // namespace mos
