#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swarmcov/core.hpp"
#include "swarmcov/planners/potential_field.hpp"
#include "swarmcov/planners/wavefront.hpp"
#include "swarmcov/world.hpp"

namespace swarmcov::plan {

enum class PlannerKind { PotentialField, Wavefront };

struct TickRecord {
  int tick = 0;
  int drone = 0;
  Vec pos;
  double delta_eff = 0.0;
  double grad_norm = 0.0;
  std::vector<std::string> events;
};

struct CoverageReport {
  int ticks = 0;
  bool completed = false;
  bool timeout = false;
  int collisions = 0;
  std::vector<int> mapped_timeline;  // cumulative count, entry 0 = at reset
  std::vector<double> drone_path_lengths;
  std::vector<std::vector<Vec>> trajectories;
  std::vector<TickRecord> trace;
};

// pf_step against a world snapshot: world obstacles plus the other drones
// (treated as point obstacles) feed the gradient.
inline StepResult pf_step(const DroneState& drone, const Vec& goal, const WorldState& env,
                          int drone_id, const PlannerConfig& cfg, Rng& rng) {
  std::vector<AABox> boxes;
  for (const auto& ob : env.obstacles) boxes.push_back(ob.box);
  std::vector<Vec> others;
  for (std::size_t i = 0; i < env.drones.size(); ++i)
    if (static_cast<int>(i) != drone_id) others.push_back(env.drones[i].position);
  return pf_step(drone.position, goal, boxes, others, env.extents(), cfg, rng);
}

namespace detail {

// First unmapped, not-known-unreachable entry of the order at or after idx.
inline int next_target(const WorldState& w, const std::vector<int>& order,
                       std::size_t& idx, const std::vector<bool>& unreachable) {
  while (idx < order.size()) {
    int t = order[idx];
    if (!w.pois[static_cast<std::size_t>(t)].mapped &&
        !unreachable[static_cast<std::size_t>(t)])
      return t;
    ++idx;
  }
  return -1;
}

inline Cell to_cell(const Vec& p) {
  return Cell{static_cast<int>(std::llround(p[0])), static_cast<int>(std::llround(p[1]))};
}

}  // namespace detail

// Joint-tick execution: every drone takes one planner step per tick, all
// updates are computed from the previous tick's snapshot and committed
// together, then mapping flags refresh. Entering an obstacle footprint is
// recorded as a collision but does not stop the run.
inline CoverageReport run_coverage(WorldState w, const std::vector<std::vector<int>>& orders,
                                   PlannerKind kind, const PlannerConfig& cfg, int max_ticks,
                                   Rng& rng) {
  if (orders.size() != w.drones.size())
    throw std::invalid_argument("run_coverage: one order per drone required");
  const std::size_t n_drones = w.drones.size();

  CoverageReport rep;
  rep.drone_path_lengths.assign(n_drones, 0.0);
  rep.trajectories.resize(n_drones);
  for (std::size_t i = 0; i < n_drones; ++i)
    rep.trajectories[i].push_back(w.drones[i].position);
  rep.mapped_timeline.push_back(w.mapped_count());

  std::vector<std::size_t> order_idx(n_drones, 0);
  std::vector<std::vector<bool>> unreachable(
      n_drones, std::vector<bool>(w.pois.size(), false));
  // Wavefront keeps a planned cell path per (drone, target) leg.
  std::vector<std::vector<Cell>> leg_path(n_drones);
  std::vector<int> leg_target(n_drones, -1);

  OccupancyGrid grid;
  if (kind == PlannerKind::Wavefront) {
    int side = static_cast<int>(w.config.extent);
    grid = OccupancyGrid(side, side);
    for (const auto& ob : w.obstacles)
      grid.set_obstacle(detail::to_cell(ob.box.center));
  }

  while (!w.done() && rep.ticks < max_ticks) {
    const WorldState snapshot = w;
    std::vector<TickRecord> records(n_drones);

    for (std::size_t d = 0; d < n_drones; ++d) {
      TickRecord& rec = records[d];
      rec.tick = rep.ticks + 1;
      rec.drone = static_cast<int>(d);

      int target = detail::next_target(snapshot, orders[d], order_idx[d], unreachable[d]);
      if (target < 0) {
        rec.pos = snapshot.drones[d].position;
        w.drones[d].position = rec.pos;
        continue;
      }
      const Vec goal = snapshot.pois[static_cast<std::size_t>(target)].position;

      if (kind == PlannerKind::PotentialField) {
        StepResult sr = pf_step(snapshot.drones[d], goal, snapshot, static_cast<int>(d),
                                cfg, rng);
        rec.delta_eff = sr.delta_eff;
        rec.grad_norm = sr.grad_norm;
        if (sr.noise_applied) rec.events.push_back("noise");
        w.drones[d].position = sr.position;
      } else {
        if (leg_target[d] != target || leg_path[d].empty()) {
          Cell from = detail::to_cell(snapshot.drones[d].position);
          Cell to = detail::to_cell(goal);
          WavefrontResult plan = wavefront_plan(grid, from, to);
          if (!plan.reachable) {
            unreachable[d][static_cast<std::size_t>(target)] = true;
            rec.events.push_back("unreachable:" + std::to_string(target));
            rec.pos = snapshot.drones[d].position;
            w.drones[d].position = rec.pos;
            continue;
          }
          leg_path[d] = plan.path;
          leg_target[d] = target;
          rec.events.push_back("plan:" + std::to_string(target));
        }
        if (!leg_path[d].empty()) {
          Cell nc = leg_path[d].front();
          leg_path[d].erase(leg_path[d].begin());
          Vec np = snapshot.drones[d].position;
          np[0] = nc.x;
          np[1] = nc.y;
          w.drones[d].position = np;
        }
      }
      rec.pos = w.drones[d].position;
      rep.drone_path_lengths[d] +=
          distance(snapshot.drones[d].position, w.drones[d].position);
    }

    std::vector<bool> was_mapped(w.pois.size());
    for (std::size_t i = 0; i < w.pois.size(); ++i) was_mapped[i] = w.pois[i].mapped;
    w = mark_mapped(std::move(w));
    w.step_count += 1;
    rep.ticks += 1;

    for (std::size_t d = 0; d < n_drones; ++d) {
      const Vec& pos = w.drones[d].position;
      for (const auto& ob : w.obstacles) {
        if (ob.box.contains(pos)) {
          rep.collisions += 1;
          records[d].events.push_back("collision");
          break;
        }
      }
      for (std::size_t i = 0; i < w.pois.size(); ++i) {
        if (w.pois[i].mapped && !was_mapped[i]) {
          bool credited = w.mode == WorldMode::Grid
                              ? detail::to_cell(pos) == detail::to_cell(w.pois[i].position)
                              : distance(pos, w.pois[i].position) < w.config.gamma;
          if (credited) records[d].events.push_back("mapped:" + std::to_string(i));
        }
      }
      rep.trajectories[d].push_back(pos);
      rep.trace.push_back(std::move(records[d]));
    }
    rep.mapped_timeline.push_back(w.mapped_count());
  }

  rep.completed = w.done();
  rep.timeout = !rep.completed;
  return rep;
}

}  // namespace swarmcov::plan
