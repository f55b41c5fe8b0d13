#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swarmcov/policy.hpp"
#include "swarmcov/world.hpp"

namespace swarmcov {

// One decision step: a PoI target chosen by the policy, the compass walk
// that pursued it, and the reward accrued over those world steps.
struct EpisodeStep {
  std::uint64_t state_hash = 0;
  int target = -1;
  std::vector<CompassAction> actions;
  double reward = 0.0;
};

struct Episode {
  AssignmentInput input;  // features the order was decoded from
  std::vector<EpisodeStep> steps;
  std::vector<double> returns;  // suffix sums over step rewards
  int total_world_steps = 0;
  bool truncated = false;
};

inline std::vector<double> returns_to_go(const std::vector<double>& rewards) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc += rewards[i];
    out[i] = acc;
  }
  return out;
}

// Single-agent plan-once rollout: sample a full visiting order up front,
// then walk each leg with greedy compass moves, scoring every world step.
// Legs whose target got mapped in passing are kept as zero-length steps so
// the decision sequence still matches the decoded order.
inline Episode rollout(const Policy& policy, const WorldState& w0, Rng& rng,
                       int max_steps) {
  if (max_steps <= 0) throw std::invalid_argument("rollout: max_steps must be > 0");
  Episode ep;
  ep.input = encode_input(w0, 0);
  if (w0.done()) return ep;

  std::vector<int> order = sample_assignment(policy, w0, 0, rng, DecodeMode::Sample);
  WorldState w = w0;
  std::vector<double> rewards;

  for (int target : order) {
    if (ep.total_world_steps >= max_steps) {
      ep.truncated = true;
      break;
    }
    EpisodeStep step;
    step.state_hash = state_hash(w);
    step.target = target;
    const Vec target_pos = w.pois[static_cast<std::size_t>(target)].position;
    while (!w.pois[static_cast<std::size_t>(target)].mapped &&
           ep.total_world_steps < max_steps) {
      CompassAction a = greedy_move_action(w.drones[0].position, target_pos);
      WorldState before = w;
      w = apply_action(std::move(w), 0, a);
      w.step_count += 1;
      step.actions.push_back(a);
      step.reward += compute_reward(before, w, 0);
      ep.total_world_steps += 1;
    }
    if (!w.pois[static_cast<std::size_t>(target)].mapped) ep.truncated = true;
    rewards.push_back(step.reward);
    ep.steps.push_back(std::move(step));
  }

  ep.returns = returns_to_go(rewards);
  return ep;
}

enum class BaselineKind { None, MovingAverage };

struct TrainConfig {
  double learning_rate = 0.05;
  BaselineKind baseline = BaselineKind::MovingAverage;
  double baseline_decay = 0.9;
  int episodes_per_update = 8;
  int max_episode_steps = 200;
  std::uint64_t seed = 0;
};

// b_k = decay * b_{k-1} + (1 - decay) * mean batch return, b_0 = 0.
struct BaselineState {
  double value = 0.0;
  int batches = 0;
};

struct UpdateStats {
  double mean_return = 0.0;
  double grad_norm = 0.0;
  bool applied = false;
};

// One REINFORCE ascent step on sum_t (G_t - b) * log pi(target_t | state_t),
// averaged over the batch. The decode is replayed teacher-forced on the
// recorded targets; the pre-update baseline is the one subtracted.
inline UpdateStats reinforce_update(Policy& policy, const std::vector<Episode>& episodes,
                                    const TrainConfig& cfg, BaselineState& baseline) {
  if (episodes.empty()) throw std::invalid_argument("reinforce_update: empty batch");
  UpdateStats stats;
  policy.params.zero_grads();

  const double b =
      cfg.baseline == BaselineKind::MovingAverage ? baseline.value : 0.0;
  double return_sum = 0.0;
  int scored = 0;

  for (const auto& ep : episodes) {
    if (!ep.steps.empty()) {
      return_sum += ep.returns[0];
      ++scored;
    }
    if (ep.steps.empty()) continue;
    nn::Graph g;
    Chooser replay = [&ep](const nn::Tensor&, int s) {
      return ep.steps[static_cast<std::size_t>(s)].target;
    };
    DecodeResult dec = decode(policy, ep.input, g,
                              static_cast<int>(ep.steps.size()), replay, true);
    std::vector<double> coefs;
    for (double G : ep.returns)
      coefs.push_back((G - b) / static_cast<double>(episodes.size()));
    g.backward(g.sum_scalars(dec.log_probs, coefs));
  }

  stats.mean_return = scored > 0 ? return_sum / scored : 0.0;
  stats.grad_norm = policy.params.grad_norm();
  if (!policy.params.grads_finite()) {
    policy.params.zero_grads();
    return stats;  // applied stays false; parameters untouched
  }
  policy.params.ascend(cfg.learning_rate);
  stats.applied = true;

  if (cfg.baseline == BaselineKind::MovingAverage) {
    baseline.value = cfg.baseline_decay * baseline.value +
                     (1.0 - cfg.baseline_decay) * stats.mean_return;
    baseline.batches += 1;
  }
  return stats;
}

}  // namespace swarmcov
