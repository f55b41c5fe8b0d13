#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swarmcov/checkpoint.hpp"
#include "swarmcov/harness/config.hpp"
#include "swarmcov/harness/experiment.hpp"
#include "swarmcov/reinforce.hpp"

namespace swarmcov::harness {

struct TrainLogEntry {
  int episode = 0;
  double ep_return = 0.0;
  int steps = 0;
  double grad_norm = 0.0;
  double baseline = 0.0;
};

struct TrainOutcome {
  Policy policy;
  std::vector<TrainLogEntry> log;
  int episodes_run = 0;
  bool diverged = false;
  double eval_median_steps = -1.0;
  double random_median_steps = -1.0;
};

// Walk the order leg by leg with greedy compass moves; returns the world
// steps spent (max_steps when coverage did not finish in budget).
inline int execute_order_steps(WorldState w, const std::vector<int>& order, int max_steps) {
  int total = 0;
  for (int target : order) {
    const Vec target_pos = w.pois[static_cast<std::size_t>(target)].position;
    while (!w.pois[static_cast<std::size_t>(target)].mapped && total < max_steps) {
      CompassAction a = greedy_move_action(w.drones[0].position, target_pos);
      w = apply_action(std::move(w), 0, a);
      w.step_count += 1;
      ++total;
    }
    if (total >= max_steps) break;
  }
  return w.done() ? total : max_steps;
}

// Greedy-decode coverage steps, median over held-out world seeds.
inline double evaluate_policy_median(const Policy& policy, WorldConfig wc, int n_seeds,
                                     std::uint64_t seed_base, int max_steps) {
  wc.n_drones = 1;
  std::vector<double> steps;
  Rng rng(seed_base);  // greedy decode never draws from it
  for (int i = 0; i < n_seeds; ++i) {
    wc.seed = seed_base + static_cast<std::uint64_t>(i);
    WorldState w = reset_world(wc, WorldMode::Grid);
    if (w.done()) {
      steps.push_back(0.0);
      continue;
    }
    std::vector<int> order = sample_assignment(policy, w, 0, rng, DecodeMode::Greedy);
    steps.push_back(execute_order_steps(std::move(w), order, max_steps));
  }
  return median_of(std::move(steps));
}

// Uniformly random visiting orders on the same seeds; each seed's cost is
// the mean over `orders_per_seed` draws.
inline double random_order_median(WorldConfig wc, int n_seeds, std::uint64_t seed_base,
                                  int max_steps, int orders_per_seed = 10) {
  wc.n_drones = 1;
  std::vector<double> steps;
  for (int i = 0; i < n_seeds; ++i) {
    wc.seed = seed_base + static_cast<std::uint64_t>(i);
    WorldState w = reset_world(wc, WorldMode::Grid);
    Rng rng(wc.seed * 77ULL + 13ULL);
    if (w.done()) {
      steps.push_back(0.0);
      continue;
    }
    std::vector<int> unmapped;
    for (std::size_t p = 0; p < w.pois.size(); ++p)
      if (!w.pois[p].mapped) unmapped.push_back(static_cast<int>(p));
    double acc = 0.0;
    for (int k = 0; k < orders_per_seed; ++k) {
      std::vector<int> order = unmapped;
      rng.shuffle(order);
      acc += execute_order_steps(w, order, max_steps);
    }
    steps.push_back(acc / orders_per_seed);
  }
  return median_of(std::move(steps));
}

// REINFORCE training on the single-agent grid world. Episode e runs on the
// world seeded world.seed + e; evaluation uses a held-out seed block.
inline TrainOutcome train_policy(const ExperimentConfig& cfg,
                                 const std::string& checkpoint_path = "",
                                 const std::string& log_path = "") {
  WorldConfig wc = cfg.world;
  wc.n_drones = 1;
  wc.obstacle_density = 0.0;  // the task-assignment world has no obstacles

  TrainOutcome out;
  out.policy = make_policy(cfg.policy.variant, static_cast<std::size_t>(wc.n_poi),
                           cfg.train.cfg.seed);
  Rng rng(cfg.train.cfg.seed ^ 0xABCD1234ULL);
  BaselineState baseline;

  int updates = 0;
  while (out.episodes_run < cfg.train.episodes) {
    std::vector<Episode> batch;
    std::vector<TrainLogEntry> entries;
    int batch_n = std::min(cfg.train.cfg.episodes_per_update,
                           cfg.train.episodes - out.episodes_run);
    for (int b = 0; b < batch_n; ++b) {
      wc.seed = cfg.world.seed + static_cast<std::uint64_t>(out.episodes_run);
      WorldState w = reset_world(wc, WorldMode::Grid);
      Episode ep = rollout(out.policy, w, rng, cfg.train.cfg.max_episode_steps);
      TrainLogEntry e;
      e.episode = out.episodes_run;
      e.ep_return = ep.returns.empty() ? 0.0 : ep.returns[0];
      e.steps = ep.total_world_steps;
      entries.push_back(e);
      batch.push_back(std::move(ep));
      out.episodes_run += 1;
    }
    UpdateStats stats = reinforce_update(out.policy, batch, cfg.train.cfg, baseline);
    if (!stats.applied) {
      out.diverged = true;
      break;
    }
    for (auto& e : entries) {
      e.grad_norm = stats.grad_norm;
      e.baseline = baseline.value;
      out.log.push_back(e);
    }
    updates += 1;
    if (!checkpoint_path.empty() && cfg.train.checkpoint_every > 0 &&
        updates % cfg.train.checkpoint_every == 0)
      save_checkpoint(out.policy, checkpoint_path);
  }

  const std::uint64_t eval_base = cfg.world.seed + 1000000ULL;
  out.eval_median_steps = evaluate_policy_median(out.policy, wc, cfg.train.eval_seeds,
                                                 eval_base, cfg.train.cfg.max_episode_steps);
  out.random_median_steps = random_order_median(wc, cfg.train.eval_seeds, eval_base,
                                                cfg.train.cfg.max_episode_steps);

  if (!checkpoint_path.empty()) save_checkpoint(out.policy, checkpoint_path);
  if (!log_path.empty()) {
    std::ofstream log(log_path);
    for (const auto& e : out.log)
      log << nlohmann::json{{"episode", e.episode},
                            {"return", e.ep_return},
                            {"steps", e.steps},
                            {"grad_norm", e.grad_norm},
                            {"baseline", e.baseline}}
                 .dump()
          << "\n";
  }
  return out;
}

}  // namespace swarmcov::harness
