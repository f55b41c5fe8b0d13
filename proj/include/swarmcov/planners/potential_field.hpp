#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarmcov/core.hpp"
#include "swarmcov/planners/geometry.hpp"
#include "swarmcov/planners/losses.hpp"

namespace swarmcov::plan {

struct PlannerConfig {
  LossKind loss = LossKind::HuberFixed;
  double huber_delta = 1.0;       // fixed-delta Huber
  double alpha = 1.0;             // adaptive delta: overlap scaling
  double beta = 1.0;              // adaptive delta: overlap exponent
  double gamma = 0.5;             // mapping radius
  double repulsion_range = 1.0;   // D; must not exceed fov_edge / 2
  double repulsive_scale = 0.5;   // in (0, 1]
  double noise_threshold = 0.01;  // tau: add noise when |update| drops below
  double noise_magnitude = 0.1;   // epsilon: per-axis uniform noise bound
  double step_scale = 1.0;        // eta
  double fov_edge = 2.0;          // d

  void validate() const {
    if (huber_delta <= 0.0) throw ConfigError("huber_delta must be > 0");
    if (alpha <= 0.0) throw ConfigError("alpha must be > 0");
    if (beta < 1.0) throw ConfigError("beta must be >= 1");
    if (gamma <= 0.0) throw ConfigError("gamma must be > 0");
    if (repulsive_scale <= 0.0 || repulsive_scale > 1.0)
      throw ConfigError("repulsive_scale must be in (0, 1]");
    if (noise_threshold < 0.0) throw ConfigError("noise_threshold must be >= 0");
    if (noise_magnitude < 0.0) throw ConfigError("noise_magnitude must be >= 0");
    if (step_scale <= 0.0) throw ConfigError("step_scale must be > 0");
    if (fov_edge <= 0.0) throw ConfigError("fov_edge must be > 0");
    if (repulsion_range <= 0.0 || repulsion_range > fov_edge / 2.0 + 1e-12)
      throw ConfigError("repulsion_range must be in (0, fov_edge/2]");
  }
};

struct GradientInfo {
  Vec grad;
  double delta_eff = 0.0;
  double overlap = 0.0;
};

// Gradient of C = U_att + repulsive_scale * U_rep at x. The attractive term
// is the per-coordinate loss against the goal; each obstacle whose nearest
// box point lies within D contributes a negated loss term against that
// point, as does every other drone within D. For the adaptive Huber kind,
// delta follows the FoV-overlap rule before any term is evaluated, so one
// perceived-obstacle size throttles the whole step.
inline GradientInfo potential_gradient(const Vec& x, const Vec& goal,
                                       const std::vector<AABox>& obstacles,
                                       const std::vector<Vec>& other_drones,
                                       const PlannerConfig& cfg) {
  GradientInfo info;
  info.grad = x;
  for (int i = 0; i < x.dim; ++i) info.grad[i] = 0.0;

  double fov_measure = std::pow(cfg.fov_edge, x.dim);
  if (is_huber(cfg.loss)) {
    if (cfg.loss == LossKind::HuberFixed) {
      info.delta_eff = cfg.huber_delta;
    } else {
      AABox fov = fov_box(x, cfg.fov_edge);
      double overlap = 0.0;
      for (const auto& ob : obstacles) overlap += box_overlap(fov, ob);
      info.overlap = std::min(overlap, fov_measure);
      info.delta_eff =
          adaptive_delta(fov_measure, info.overlap, cfg.alpha, cfg.beta, cfg.fov_edge);
    }
  }

  for (int i = 0; i < x.dim; ++i)
    info.grad[i] += loss_grad(cfg.loss, x[i] - goal[i], info.delta_eff);

  auto repel = [&](const Vec& point) {
    for (int i = 0; i < x.dim; ++i)
      info.grad[i] -=
          cfg.repulsive_scale * loss_grad(cfg.loss, x[i] - point[i], info.delta_eff);
  };
  for (const auto& ob : obstacles)
    if (ob.distance_to(x) <= cfg.repulsion_range) repel(ob.nearest_point(x));
  for (const auto& d : other_drones)
    if (distance(x, d) <= cfg.repulsion_range) repel(d);

  return info;
}

struct StepResult {
  Vec position;
  double delta_eff = 0.0;
  double grad_norm = 0.0;
  bool noise_applied = false;
};

// Gradient descent update u = -eta * grad C, with uniform per-axis noise
// injected when the update magnitude falls below the threshold (the nudge
// that breaks oscillation stalls). The result is clamped to world bounds.
inline StepResult pf_step(const Vec& pos, const Vec& goal,
                          const std::vector<AABox>& obstacles,
                          const std::vector<Vec>& other_drones, const Vec& extents,
                          const PlannerConfig& cfg, Rng& rng) {
  GradientInfo gi = potential_gradient(pos, goal, obstacles, other_drones, cfg);
  StepResult res;
  res.delta_eff = gi.delta_eff;
  res.grad_norm = gi.grad.norm();

  Vec u = gi.grad * (-cfg.step_scale);
  if (u.norm() < cfg.noise_threshold && cfg.noise_magnitude > 0.0) {
    for (int i = 0; i < pos.dim; ++i)
      u[i] += rng.uniform(-cfg.noise_magnitude, cfg.noise_magnitude);
    res.noise_applied = true;
  }

  res.position = pos + u;
  for (int i = 0; i < pos.dim; ++i)
    res.position[i] = clamp(res.position[i], 0.0, extents[i]);
  return res;
}

}  // namespace swarmcov::plan
