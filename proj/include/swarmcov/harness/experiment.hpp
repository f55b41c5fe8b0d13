#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "swarmcov/checkpoint.hpp"
#include "swarmcov/harness/config.hpp"
#include "swarmcov/planners/coverage.hpp"
#include "swarmcov/policy.hpp"

namespace swarmcov::harness {

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> orders;
  plan::CoverageReport report;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedRun> runs;
  double median_ticks = 0.0;
  double mean_ticks = 0.0;
  int best_ticks = 0;
  int total_collisions = 0;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace detail {

inline Rng run_rng(std::uint64_t seed) {
  return Rng(seed * 0x9E3779B97F4A7C15ULL + 0x5EEDULL);
}

inline std::vector<int> random_order(int n_poi, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(n_poi));
  for (int i = 0; i < n_poi; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);
  return order;
}

}  // namespace detail

// Visiting orders for every drone. Random sources draw independent
// permutations; policy sources run one replicated inference per drone.
inline std::vector<std::vector<int>> assignment_orders(const ExperimentConfig& cfg,
                                                       const WorldState& w,
                                                       const std::optional<Policy>& policy,
                                                       Rng& rng) {
  std::vector<std::vector<int>> orders;
  if (cfg.policy.kind == PolicySource::Kind::Random || !policy) {
    for (int d = 0; d < cfg.world.n_drones; ++d)
      orders.push_back(detail::random_order(cfg.world.n_poi, rng));
    return orders;
  }
  std::vector<Policy> handles = replicate(*policy, cfg.world.n_drones);
  for (int d = 0; d < cfg.world.n_drones; ++d) {
    std::vector<int> order =
        sample_assignment(handles[static_cast<std::size_t>(d)], w, d, rng,
                          cfg.policy.decode_mode);
    // Targets mapped at spawn never made it into the order; the coverage
    // runner skips anything mapped later.
    orders.push_back(std::move(order));
  }
  return orders;
}

inline WorldMode world_mode_for(plan::PlannerKind kind) {
  return kind == plan::PlannerKind::Wavefront ? WorldMode::Grid : WorldMode::Continuous;
}

// One seed of the full pipeline: reset, assign, plan, run.
inline SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                        const std::optional<Policy>& policy) {
  WorldConfig wc = cfg.world;
  wc.seed = seed;
  WorldState w = reset_world(wc, world_mode_for(cfg.planner_kind));
  Rng rng = detail::run_rng(seed);
  SeedRun run;
  run.seed = seed;
  run.orders = assignment_orders(cfg, w, policy, rng);
  run.report =
      plan::run_coverage(std::move(w), run.orders, cfg.planner_kind, cfg.planner,
                         cfg.max_ticks, rng);
  return run;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       const std::optional<Policy>& policy = std::nullopt) {
  std::optional<Policy> pol = policy;
  if (!pol && cfg.policy.kind == PolicySource::Kind::Checkpoint)
    pol = load_checkpoint(cfg.policy.checkpoint);

  ExperimentReport rep;
  rep.config = cfg;
  std::vector<double> ticks;
  for (int i = 0; i < cfg.n_seeds; ++i) {
    SeedRun run = run_seed(cfg, cfg.world.seed + static_cast<std::uint64_t>(i), pol);
    ticks.push_back(run.report.ticks);
    rep.total_collisions += run.report.collisions;
    rep.runs.push_back(std::move(run));
  }
  rep.median_ticks = median_of(ticks);
  rep.mean_ticks = 0.0;
  for (double t : ticks) rep.mean_ticks += t;
  rep.mean_ticks /= static_cast<double>(ticks.size());
  rep.best_ticks = static_cast<int>(*std::min_element(ticks.begin(), ticks.end()));
  return rep;
}

// --- emission ---

inline nlohmann::json trace_header(const ExperimentConfig& cfg, std::uint64_t seed) {
  return {{"type", "header"}, {"seed", seed}, {"config", to_json(cfg)}};
}

inline nlohmann::json tick_record_json(const plan::TickRecord& r) {
  return {{"type", "tick"},    {"tick", r.tick},
          {"drone", r.drone},  {"pos", swarmcov::to_json(r.pos)},
          {"delta_eff", r.delta_eff}, {"grad_norm", r.grad_norm},
          {"events", r.events}};
}

inline void write_trace(const ExperimentConfig& cfg, const SeedRun& run,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace: " + path);
  out << trace_header(cfg, run.seed).dump() << "\n";
  for (const auto& rec : run.report.trace) out << tick_record_json(rec).dump() << "\n";
}

inline std::string csv_report(const ExperimentReport& rep) {
  std::string csv = "loss_kind,alpha,beta,seed,ticks,collisions\n";
  const auto& pc = rep.config.planner;
  bool adaptive = pc.loss == plan::LossKind::HuberAdaptive;
  std::string kind = rep.config.planner_kind == plan::PlannerKind::Wavefront
                         ? "wavefront"
                         : plan::loss_name(pc.loss);
  for (const auto& run : rep.runs) {
    csv += kind + "," + (adaptive ? std::to_string(pc.alpha) : "0") + "," +
           (adaptive ? std::to_string(pc.beta) : "0") + "," + std::to_string(run.seed) +
           "," + std::to_string(run.report.ticks) + "," +
           std::to_string(run.report.collisions) + "\n";
  }
  return csv;
}

inline nlohmann::json summary_json(const ExperimentReport& rep) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& run : rep.runs)
    seeds.push_back({{"seed", run.seed},
                     {"ticks", run.report.ticks},
                     {"completed", run.report.completed},
                     {"collisions", run.report.collisions},
                     {"mapped_timeline", run.report.mapped_timeline},
                     {"path_lengths", run.report.drone_path_lengths}});
  return {{"config", to_json(rep.config)},
          {"median_ticks", rep.median_ticks},
          {"mean_ticks", rep.mean_ticks},
          {"best_ticks", rep.best_ticks},
          {"total_collisions", rep.total_collisions},
          {"seeds", seeds}};
}

// report.csv (or .jsonl), per-seed tick traces, and a summary.
inline void emit_report(const ExperimentReport& rep, const std::string& out_dir,
                        const std::string& format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (format == "csv") {
    std::ofstream out(out_dir + "/report.csv");
    out << csv_report(rep);
  } else if (format == "jsonl") {
    std::ofstream out(out_dir + "/report.jsonl");
    for (const auto& run : rep.runs)
      out << nlohmann::json{{"seed", run.seed},
                            {"ticks", run.report.ticks},
                            {"collisions", run.report.collisions}}
                 .dump()
          << "\n";
  } else {
    throw ConfigError("emit_report: format must be csv or jsonl");
  }
  for (const auto& run : rep.runs)
    write_trace(rep.config, run, out_dir + "/trace_seed" + std::to_string(run.seed) + ".jsonl");
  std::ofstream sum(out_dir + "/summary.json");
  sum << summary_json(rep).dump(2) << "\n";
}

}  // namespace swarmcov::harness
