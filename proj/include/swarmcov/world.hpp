#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmcov/core.hpp"
#include "swarmcov/planners/geometry.hpp"

namespace swarmcov {

// Altitude ceiling of 3D worlds; PoI altitudes are drawn from [5, 10) and
// obstacle heights from [1, 10), so the z axis always spans [0, 10].
inline constexpr double kZExtent = 10.0;

enum class CompassAction { N, NE, E, SE, S, SW, W, NW };

inline const std::array<std::array<int, 2>, 8>& compass_deltas() {
  static const std::array<std::array<int, 2>, 8> k = {{
      {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}};
  return k;
}

inline std::string compass_name(CompassAction a) {
  static const char* names[] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[static_cast<int>(a)];
}

struct PointOfInterest {
  Vec position;
  bool high_priority = false;
  bool mapped = false;
};

struct Obstacle {
  plan::AABox box;
  double height() const { return 2.0 * box.half[2]; }  // 3D only
};

struct DroneState {
  Vec position;
  double fov_edge = 2.0;
};

struct WorldConfig {
  int dims = 2;
  double extent = 5.0;  // x/y extent in cells; z is fixed to kZExtent in 3D
  int n_drones = 1;
  int n_poi = 25;
  int high_priority_count = 5;
  double obstacle_density = 0.0;
  double fov_edge = 2.0;
  double gamma = 0.5;        // mapping radius in continuous worlds
  double alpha_reward = 5.0;
  std::uint64_t seed = 0;
};

// Grid worlds hold integer coordinates and cell-occupancy mapping (the task
// assignment setting and the wavefront planner). Continuous worlds place
// entities at cell centers and map by gamma-ball distance (potential field).
enum class WorldMode { Grid, Continuous };

struct WorldState {
  WorldConfig config;
  WorldMode mode = WorldMode::Grid;
  int step_count = 0;
  std::vector<DroneState> drones;
  std::vector<PointOfInterest> pois;
  std::vector<Obstacle> obstacles;

  int dims() const { return config.dims; }

  Vec extents() const {
    return config.dims == 2 ? vec2(config.extent, config.extent)
                            : vec3(config.extent, config.extent, kZExtent);
  }

  bool done() const {
    return std::all_of(pois.begin(), pois.end(),
                       [](const PointOfInterest& p) { return p.mapped; });
  }

  int mapped_count() const {
    return static_cast<int>(std::count_if(
        pois.begin(), pois.end(), [](const PointOfInterest& p) { return p.mapped; }));
  }
};

namespace detail {

inline int cell_index(const Vec& p, double extent) {
  int x = static_cast<int>(std::floor(p[0]));
  int y = static_cast<int>(std::floor(p[1]));
  return y * static_cast<int>(extent) + x;
}

inline void validate(const WorldConfig& cfg) {
  if (cfg.dims != 2 && cfg.dims != 3) throw ConfigError("dims must be 2 or 3");
  if (cfg.extent < 1.0) throw ConfigError("extent must be >= 1");
  if (cfg.n_drones < 1) throw ConfigError("n_drones must be >= 1");
  if (cfg.n_poi < 0) throw ConfigError("n_poi must be >= 0");
  if (cfg.high_priority_count < 0 || cfg.high_priority_count > cfg.n_poi)
    throw ConfigError("high_priority_count must be in [0, n_poi]");
  if (cfg.obstacle_density < 0.0 || cfg.obstacle_density > 1.0)
    throw ConfigError("obstacle_density must be in [0, 1]");
  if (cfg.fov_edge <= 0.0) throw ConfigError("fov_edge must be > 0");
  if (cfg.gamma <= 0.0) throw ConfigError("gamma must be > 0");
  if (cfg.alpha_reward <= 0.0) throw ConfigError("alpha_reward must be > 0");
}

}  // namespace detail

// Mapping rule. Grid: a PoI is mapped once a drone occupies its cell.
// Continuous: mapped once some drone is within gamma (L2). Flags are
// monotone; already-mapped points never revert.
inline WorldState mark_mapped(WorldState w) {
  for (auto& poi : w.pois) {
    if (poi.mapped) continue;
    for (const auto& drone : w.drones) {
      if (w.mode == WorldMode::Grid) {
        bool same = true;
        for (int i = 0; i < w.dims(); ++i)
          if (drone.position[i] != poi.position[i]) same = false;
        if (same) {
          poi.mapped = true;
          break;
        }
      } else if (distance(drone.position, poi.position) < w.config.gamma) {
        poi.mapped = true;
        break;
      }
    }
  }
  return w;
}

// Build a world from (config, seed): obstacles, then PoI (sorted row-major
// by cell), then the high-priority subset, then drone spawn cells. The draw
// order is fixed so identical (config, seed) produce identical worlds.
inline WorldState reset_world(const WorldConfig& cfg, WorldMode mode) {
  detail::validate(cfg);
  const int side = static_cast<int>(cfg.extent);
  const int n_cells = side * side;
  Rng rng(cfg.seed);

  WorldState w;
  w.config = cfg;
  w.mode = mode;

  // Obstacles. Grid worlds block whole cells; continuous worlds place unit
  // boxes at interior lattice corners so every cell center stays reachable.
  std::vector<bool> cell_blocked(static_cast<std::size_t>(n_cells), false);
  if (cfg.obstacle_density > 0.0) {
    if (mode == WorldMode::Grid) {
      int count = static_cast<int>(std::round(cfg.obstacle_density * n_cells));
      for (int idx : rng.sample_indices(n_cells, count)) {
        cell_blocked[static_cast<std::size_t>(idx)] = true;
        Obstacle ob;
        double x = idx % side, y = idx / side;
        ob.box.center = cfg.dims == 2 ? vec2(x, y) : vec3(x, y, 0.5);
        ob.box.half = cfg.dims == 2 ? vec2(0.5, 0.5) : vec3(0.5, 0.5, 0.5);
        w.obstacles.push_back(ob);
      }
    } else {
      int corners_side = side - 1;
      int n_corners = corners_side * corners_side;
      int count = static_cast<int>(std::round(cfg.obstacle_density * n_corners));
      auto picks = rng.sample_indices(std::max(n_corners, 1), std::min(count, n_corners));
      std::sort(picks.begin(), picks.end());
      for (int idx : picks) {
        double cx = 1.0 + idx % corners_side;
        double cy = 1.0 + idx / corners_side;
        Obstacle ob;
        if (cfg.dims == 2) {
          ob.box.center = vec2(cx, cy);
          ob.box.half = vec2(0.5, 0.5);
        } else {
          double h = rng.uniform(1.0, kZExtent);
          ob.box.center = vec3(cx, cy, h / 2.0);
          ob.box.half = vec3(0.5, 0.5, h / 2.0);
        }
        w.obstacles.push_back(ob);
      }
    }
  }

  // PoI on distinct cells, stored row-major.
  std::vector<int> free_cells;
  for (int i = 0; i < n_cells; ++i)
    if (!(mode == WorldMode::Grid && cell_blocked[static_cast<std::size_t>(i)]))
      free_cells.push_back(i);
  if (cfg.n_poi > static_cast<int>(free_cells.size()))
    throw ConfigError("n_poi exceeds the number of available cells");

  auto poi_picks = rng.sample_indices(static_cast<int>(free_cells.size()), cfg.n_poi);
  std::vector<int> poi_cells;
  for (int k : poi_picks) poi_cells.push_back(free_cells[static_cast<std::size_t>(k)]);
  std::sort(poi_cells.begin(), poi_cells.end());

  auto high_picks = rng.sample_indices(std::max(cfg.n_poi, 1),
                                       std::min(cfg.high_priority_count, cfg.n_poi));
  std::vector<bool> is_high(static_cast<std::size_t>(cfg.n_poi), false);
  for (int k : high_picks) is_high[static_cast<std::size_t>(k)] = true;

  for (int i = 0; i < cfg.n_poi; ++i) {
    int idx = poi_cells[static_cast<std::size_t>(i)];
    double x = idx % side, y = idx / side;
    PointOfInterest poi;
    poi.high_priority = is_high[static_cast<std::size_t>(i)];
    if (mode == WorldMode::Grid) {
      poi.position = cfg.dims == 2 ? vec2(x, y) : vec3(x, y, 0.0);
    } else {
      double z = cfg.dims == 3 ? rng.uniform(5.0, kZExtent) : 0.0;
      poi.position = cfg.dims == 2 ? vec2(x + 0.5, y + 0.5) : vec3(x + 0.5, y + 0.5, z);
    }
    w.pois.push_back(poi);
  }

  // Drones on distinct free cells.
  if (cfg.n_drones > static_cast<int>(free_cells.size()))
    throw ConfigError("n_drones exceeds the number of available cells");
  auto drone_picks = rng.sample_indices(static_cast<int>(free_cells.size()), cfg.n_drones);
  for (int k : drone_picks) {
    int idx = free_cells[static_cast<std::size_t>(k)];
    double x = idx % side, y = idx / side;
    DroneState d;
    d.fov_edge = cfg.fov_edge;
    if (mode == WorldMode::Grid) {
      d.position = cfg.dims == 2 ? vec2(x, y) : vec3(x, y, 0.0);
    } else {
      double z = cfg.dims == 3 ? rng.uniform(5.0, kZExtent) : 0.0;
      d.position = cfg.dims == 2 ? vec2(x + 0.5, y + 0.5) : vec3(x + 0.5, y + 0.5, z);
    }
    w.drones.push_back(d);
  }

  return mark_mapped(std::move(w));
}

inline WorldState reset_world(const WorldConfig& cfg) {
  return reset_world(cfg, WorldMode::Grid);
}

// Compass action whose displacement sign-matches the (dx, dy) to the target.
inline CompassAction greedy_move_action(const Vec& from, const Vec& target) {
  int sx = (target[0] > from[0]) - (target[0] < from[0]);
  int sy = (target[1] > from[1]) - (target[1] < from[1]);
  if (sx == 0 && sy == 0)
    throw std::invalid_argument("greedy_move_action: already at target");
  for (int a = 0; a < 8; ++a)
    if (compass_deltas()[static_cast<std::size_t>(a)][0] == sx &&
        compass_deltas()[static_cast<std::size_t>(a)][1] == sy)
      return static_cast<CompassAction>(a);
  throw std::logic_error("greedy_move_action: no matching action");
}

// One drone moves by the unit displacement of `a`, clamped to the grid.
// Mapping flags are refreshed; step_count is advanced by the joint-step
// driver once all drones have acted, not here.
inline WorldState apply_action(WorldState w, int drone_id, CompassAction a) {
  if (drone_id < 0 || drone_id >= static_cast<int>(w.drones.size()))
    throw std::invalid_argument("apply_action: bad drone id");
  auto& pos = w.drones[static_cast<std::size_t>(drone_id)].position;
  const auto& d = compass_deltas()[static_cast<std::size_t>(a)];
  pos[0] = clamp(pos[0] + d[0], 0.0, w.config.extent - 1.0);
  pos[1] = clamp(pos[1] + d[1], 0.0, w.config.extent - 1.0);
  return mark_mapped(std::move(w));
}

// Reward for one joint step, from the acting drone's point of view:
//   R1: alpha per newly mapped low-priority point credited to this drone,
//       2*alpha per high-priority (summed when several map at once).
//   R2: 0 once every high-priority point is mapped, else the L2 distance
//       from the drone's post-step position to the nearest unmapped one.
//   reward = R1 - R2 - 1.
inline double compute_reward(const WorldState& before, const WorldState& after,
                             int drone_id) {
  if (drone_id < 0 || drone_id >= static_cast<int>(after.drones.size()))
    throw std::invalid_argument("compute_reward: bad drone id");
  const Vec& dpos = after.drones[static_cast<std::size_t>(drone_id)].position;
  const double alpha = after.config.alpha_reward;

  double r1 = 0.0;
  for (std::size_t i = 0; i < after.pois.size(); ++i) {
    if (!after.pois[i].mapped || before.pois[i].mapped) continue;
    bool credited;
    if (after.mode == WorldMode::Grid) {
      credited = true;
      for (int k = 0; k < after.dims(); ++k)
        if (dpos[k] != after.pois[i].position[k]) credited = false;
    } else {
      credited = distance(dpos, after.pois[i].position) < after.config.gamma;
    }
    if (credited) r1 += after.pois[i].high_priority ? 2.0 * alpha : alpha;
  }

  double r2 = 0.0;
  bool any_high_unmapped = false;
  for (const auto& poi : after.pois) {
    if (!poi.high_priority || poi.mapped) continue;
    double dist = distance(dpos, poi.position);
    if (!any_high_unmapped || dist < r2) r2 = dist;
    any_high_unmapped = true;
  }

  return r1 - (any_high_unmapped ? r2 : 0.0) - 1.0;
}

// --- JSON ---

inline nlohmann::json to_json(const Vec& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.dim; ++i) arr.push_back(v[i]);
  return arr;
}

inline Vec vec_from_json(const nlohmann::json& j) {
  Vec v;
  v.dim = static_cast<int>(j.size());
  for (int i = 0; i < v.dim; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

inline nlohmann::json to_json(const WorldConfig& c) {
  return {{"dims", c.dims},
          {"extent", c.extent},
          {"n_drones", c.n_drones},
          {"n_poi", c.n_poi},
          {"high_priority_count", c.high_priority_count},
          {"obstacle_density", c.obstacle_density},
          {"fov_edge", c.fov_edge},
          {"gamma", c.gamma},
          {"alpha_reward", c.alpha_reward},
          {"seed", c.seed}};
}

inline nlohmann::json to_json(const WorldState& w) {
  nlohmann::json j;
  j["config"] = to_json(w.config);
  j["mode"] = w.mode == WorldMode::Grid ? "grid" : "continuous";
  j["step_count"] = w.step_count;
  j["drones"] = nlohmann::json::array();
  for (const auto& d : w.drones)
    j["drones"].push_back({{"pos", to_json(d.position)}, {"fov_edge", d.fov_edge}});
  j["pois"] = nlohmann::json::array();
  for (const auto& p : w.pois)
    j["pois"].push_back({{"pos", to_json(p.position)},
                         {"high", p.high_priority},
                         {"mapped", p.mapped}});
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : w.obstacles)
    j["obstacles"].push_back(
        {{"center", to_json(o.box.center)}, {"half", to_json(o.box.half)}});
  return j;
}

inline std::string serialize(const WorldState& w) { return to_json(w).dump(); }

inline std::uint64_t state_hash(const WorldState& w) { return fnv1a(serialize(w)); }

}  // namespace swarmcov
