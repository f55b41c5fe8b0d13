#pragma once

#include <string>
#include <vector>

#include "swarmcov/harness/experiment.hpp"
#include "swarmcov/policy.hpp"

namespace swarmcov::harness {

// Reference parameter totals the default hidden sizes were chosen against.
inline constexpr std::size_t kReferenceParams[] = {103516, 161564, 111140, 116736};

struct SizingRow {
  PolicyVariant variant;
  PolicyDims dims;
  std::size_t params = 0;
  std::size_t reference = 0;
  double rel_diff = 0.0;
};

inline std::vector<SizingRow> bench_table1(std::size_t n_poi = 25) {
  std::vector<SizingRow> rows;
  const PolicyVariant variants[] = {PolicyVariant::Seq2Seq, PolicyVariant::Seq2SeqAttention,
                                    PolicyVariant::TransformerEnc, PolicyVariant::PointerNet};
  for (int i = 0; i < 4; ++i) {
    SizingRow r;
    r.variant = variants[i];
    r.dims = default_dims(variants[i], n_poi);
    r.params = count_parameters(variants[i], r.dims);
    r.reference = kReferenceParams[i];
    r.rel_diff = (static_cast<double>(r.params) - static_cast<double>(r.reference)) /
                 static_cast<double>(r.reference);
    rows.push_back(r);
  }
  return rows;
}

struct BenchRow {
  std::string label;
  ExperimentConfig config;
  std::vector<int> ticks;
  double median_ticks = 0.0;
  int best_ticks = 0;
  int collisions = 0;
  int timeouts = 0;
};

namespace detail {

inline BenchRow bench_row(std::string label, const ExperimentConfig& cfg) {
  BenchRow row;
  row.label = std::move(label);
  row.config = cfg;
  ExperimentReport rep = run_experiment(cfg);
  for (const auto& run : rep.runs) {
    row.ticks.push_back(run.report.ticks);
    row.collisions += run.report.collisions;
    if (!run.report.completed) row.timeouts += 1;
  }
  row.median_ticks = rep.median_ticks;
  row.best_ticks = rep.best_ticks;
  return row;
}

inline ExperimentConfig pf_bench_base(int dims, std::uint64_t base_seed, int n_seeds,
                                      int max_ticks) {
  ExperimentConfig cfg;
  cfg.world.dims = dims;
  cfg.world.extent = 5.0;
  cfg.world.n_drones = 2;
  cfg.world.n_poi = 25;
  cfg.world.high_priority_count = 5;
  cfg.world.obstacle_density = dims == 2 ? 0.15 : 0.25;
  cfg.world.fov_edge = 2.0;
  cfg.world.seed = base_seed;
  cfg.planner_kind = plan::PlannerKind::PotentialField;
  cfg.planner.fov_edge = cfg.world.fov_edge;
  cfg.planner.gamma = cfg.world.gamma;
  cfg.planner.repulsion_range = cfg.planner.fov_edge / 2.0;
  cfg.planner.noise_magnitude = 0.1 * (cfg.planner.fov_edge / 2.0);
  cfg.n_seeds = n_seeds;
  cfg.max_ticks = max_ticks;
  return cfg;
}

inline ExperimentConfig with_loss(ExperimentConfig cfg, plan::LossKind loss, double delta,
                                  double alpha, double beta) {
  cfg.planner.loss = loss;
  cfg.planner.huber_delta = delta;
  cfg.planner.alpha = alpha;
  cfg.planner.beta = beta;
  return cfg;
}

}  // namespace detail

// Loss-function sweep in the 2D continuous world (two drones, 25 points,
// identical seeds across rows).
inline std::vector<BenchRow> bench_table2(std::uint64_t base_seed, int n_seeds,
                                          int max_ticks) {
  ExperimentConfig base = detail::pf_bench_base(2, base_seed, n_seeds, max_ticks);
  using plan::LossKind;
  std::vector<BenchRow> rows;
  rows.push_back(detail::bench_row("l1", detail::with_loss(base, LossKind::L1, 1, 1, 1)));
  rows.push_back(detail::bench_row("mse", detail::with_loss(base, LossKind::MSE, 1, 1, 1)));
  rows.push_back(
      detail::bench_row("log_cosh", detail::with_loss(base, LossKind::LogCosh, 1, 1, 1)));
  rows.push_back(detail::bench_row(
      "huber_delta_0.5", detail::with_loss(base, LossKind::HuberFixed, 0.5, 1, 1)));
  rows.push_back(detail::bench_row(
      "huber_delta_1.0", detail::with_loss(base, LossKind::HuberFixed, 1.0, 1, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a1_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 1, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a2_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 2, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a4_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 4, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a1_b2", detail::with_loss(base, LossKind::HuberAdaptive, 1, 1, 2)));
  return rows;
}

// 3D sweep: the L1 reference row plus the adaptive-delta parameterizations.
inline std::vector<BenchRow> bench_table3(std::uint64_t base_seed, int n_seeds,
                                          int max_ticks) {
  ExperimentConfig base = detail::pf_bench_base(3, base_seed, n_seeds, max_ticks);
  using plan::LossKind;
  std::vector<BenchRow> rows;
  rows.push_back(detail::bench_row("l1", detail::with_loss(base, LossKind::L1, 1, 1, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a1_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 1, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a2_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 2, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a4_b1", detail::with_loss(base, LossKind::HuberAdaptive, 1, 4, 1)));
  rows.push_back(detail::bench_row(
      "adaptive_a1_b2", detail::with_loss(base, LossKind::HuberAdaptive, 1, 1, 2)));
  return rows;
}

}  // namespace swarmcov::harness
