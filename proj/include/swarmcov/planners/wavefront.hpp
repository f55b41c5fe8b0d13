#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

namespace swarmcov::plan {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
};

struct OccupancyGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // 0 = free, 1 = obstacle

  OccupancyGrid() = default;
  OccupancyGrid(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool obstacle(const Cell& c) const {
    return cells[static_cast<std::size_t>(c.y) * width + c.x] != 0;
  }
  void set_obstacle(const Cell& c) {
    cells[static_cast<std::size_t>(c.y) * width + c.x] = 1;
  }
};

struct WavefrontResult {
  bool reachable = false;
  std::vector<Cell> path;       // cells after the start, ending at the goal
  std::vector<int> wave;        // the propagated value grid (obstacle=1, goal=2)
};

// 8-connected neighbor offsets in fixed compass priority
// N, NE, E, SE, S, SW, W, NW; this order also breaks ties during extraction.
inline const std::array<std::array<int, 2>, 8>& compass_offsets() {
  static const std::array<std::array<int, 2>, 8> k = {{
      {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}};
  return k;
}

// Value propagation: goal cell = 2, obstacles = 1, everything else 0; each
// wave ring gets the previous value + 1 and obstacle cells are never
// expanded. The path is read from the start by stepping to the
// lowest-valued reached neighbor, which decreases by exactly 1 per move.
inline WavefrontResult wavefront_plan(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal))
    throw std::invalid_argument("wavefront_plan: start/goal out of bounds");
  if (grid.obstacle(start) || grid.obstacle(goal))
    throw std::invalid_argument("wavefront_plan: start/goal on an obstacle cell");

  WavefrontResult res;
  res.wave.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);
  auto at = [&](const Cell& c) -> int& {
    return res.wave[static_cast<std::size_t>(c.y) * grid.width + c.x];
  };
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      if (grid.obstacle({x, y})) res.wave[static_cast<std::size_t>(y) * grid.width + x] = 1;

  at(goal) = 2;
  std::deque<Cell> frontier{goal};
  while (!frontier.empty()) {
    Cell c = frontier.front();
    frontier.pop_front();
    for (const auto& d : compass_offsets()) {
      Cell n{c.x + d[0], c.y + d[1]};
      if (!grid.in_bounds(n) || at(n) != 0) continue;
      at(n) = at(c) + 1;
      frontier.push_back(n);
    }
  }

  if (start == goal) {
    res.reachable = true;
    return res;
  }
  if (at(start) < 2) return res;  // wave never arrived

  res.reachable = true;
  Cell c = start;
  while (!(c == goal)) {
    Cell best{-1, -1};
    int best_v = at(c);
    for (const auto& d : compass_offsets()) {
      Cell n{c.x + d[0], c.y + d[1]};
      if (!grid.in_bounds(n)) continue;
      int v = at(n);
      if (v >= 2 && v < best_v) {
        best_v = v;
        best = n;
      }
    }
    if (best.x < 0) throw std::logic_error("wavefront_plan: descent stuck");
    c = best;
    res.path.push_back(c);
  }
  return res;
}

}  // namespace swarmcov::plan
