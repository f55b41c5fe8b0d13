// Minimal end-to-end example: build a 2D world with obstacles, give two
// drones random visiting orders, and run the potential-field planner with
// an adaptive Huber delta.

#include <cstdio>

#include "swarmcov/harness/experiment.hpp"

int main() {
  using namespace swarmcov;

  harness::ExperimentConfig cfg;
  cfg.world.extent = 5.0;
  cfg.world.n_drones = 2;
  cfg.world.n_poi = 25;
  cfg.world.high_priority_count = 5;
  cfg.world.obstacle_density = 0.15;
  cfg.world.seed = 3;
  cfg.planner.loss = plan::LossKind::HuberAdaptive;
  cfg.planner.alpha = 1.0;
  cfg.planner.beta = 1.0;
  cfg.n_seeds = 3;
  cfg.max_ticks = 2000;

  harness::ExperimentReport rep = harness::run_experiment(cfg);
  std::printf("adaptive Huber, %d seeds: median %.1f ticks (best %d)\n", cfg.n_seeds,
              rep.median_ticks, rep.best_ticks);
  for (const auto& run : rep.runs)
    std::printf("  seed %llu: %d ticks, %d collisions, %s\n",
                static_cast<unsigned long long>(run.seed), run.report.ticks,
                run.report.collisions, run.report.completed ? "complete" : "timeout");
  return 0;
}
