// Command-line front end: train policies, run coverage experiments, sweep
// the benchmark tables, and run the acceptance suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmcov/harness/acceptance.hpp"
#include "swarmcov/harness/bench.hpp"
#include "swarmcov/harness/config.hpp"
#include "swarmcov/harness/experiment.hpp"
#include "swarmcov/harness/train.hpp"

namespace {

using namespace swarmcov;

harness::ExperimentConfig load_or_default(const std::string& path) {
  if (path.empty()) return harness::config_from_json(nlohmann::json::object());
  return harness::load_config(path);
}

void apply_overrides(harness::ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<int> seeds, const std::string& out,
                     const std::string& format) {
  if (seed) cfg.world.seed = *seed;
  if (seeds) cfg.n_seeds = *seeds;
  if (!out.empty()) cfg.out_dir = out;
  if (!format.empty()) cfg.format = format;
}

int cmd_run(const harness::ExperimentConfig& cfg) {
  std::optional<Policy> policy;
  if (cfg.policy.kind == harness::PolicySource::Kind::Train) {
    harness::TrainOutcome t = harness::train_policy(cfg);
    if (t.diverged) {
      std::cerr << "training diverged (non-finite gradient)\n";
      return 2;
    }
    policy = std::move(t.policy);
  }
  harness::ExperimentReport rep = harness::run_experiment(cfg, policy);
  harness::emit_report(rep, cfg.out_dir, cfg.format);
  std::cout << "seeds " << cfg.n_seeds << ": median " << rep.median_ticks << " ticks, mean "
            << rep.mean_ticks << ", best " << rep.best_ticks << ", collisions "
            << rep.total_collisions << "\n"
            << "reports in " << cfg.out_dir << "\n";
  return 0;
}

int cmd_train(const harness::ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  std::string ckpt = cfg.out_dir + "/checkpoint.json";
  std::string log = cfg.out_dir + "/train_log.jsonl";
  harness::TrainOutcome t = harness::train_policy(cfg, ckpt, log);
  if (t.diverged) {
    std::cerr << "training diverged (non-finite gradient); aborted after "
              << t.episodes_run << " episodes; see " << log << "\n";
    return 2;
  }
  std::cout << variant_name(cfg.policy.variant) << ": " << t.episodes_run
            << " episodes, greedy eval median " << t.eval_median_steps
            << " steps vs random-order " << t.random_median_steps << "\n"
            << "checkpoint: " << ckpt << "\ntraining log: " << log << "\n";
  return 0;
}

int cmd_table1(const std::string& out) {
  auto rows = harness::bench_table1();
  std::printf("%-20s %10s %10s %8s  dims\n", "variant", "params", "reference", "diff");
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& r : rows) {
    std::string dims = "embed=" + std::to_string(r.dims.embed);
    if (r.dims.hidden > 0) dims += " hidden=" + std::to_string(r.dims.hidden);
    if (r.variant == PolicyVariant::TransformerEnc)
      dims += " heads=" + std::to_string(r.dims.heads) + " ff=" + std::to_string(r.dims.ff) +
              " blocks=" + std::to_string(r.dims.blocks);
    dims += " n_poi=" + std::to_string(r.dims.n_poi);
    std::printf("%-20s %10zu %10zu %7.2f%%  %s\n", variant_name(r.variant).c_str(), r.params,
                r.reference, r.rel_diff * 100.0, dims.c_str());
    jrows.push_back({{"variant", variant_name(r.variant)},
                     {"params", r.params},
                     {"reference", r.reference},
                     {"rel_diff", r.rel_diff},
                     {"dims", dims}});
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream(out + "/table1.json") << jrows.dump(2) << "\n";
  }
  return 0;
}

int emit_bench(const std::vector<harness::BenchRow>& rows, const std::string& out,
               const std::string& name) {
  std::printf("%-18s %8s %8s %10s %9s\n", "config", "median", "best", "collisions",
              "timeouts");
  std::string csv = "label,seed,ticks,collisions\n";
  for (const auto& r : rows) {
    std::printf("%-18s %8.1f %8d %10d %9d\n", r.label.c_str(), r.median_ticks, r.best_ticks,
                r.collisions, r.timeouts);
    for (std::size_t i = 0; i < r.ticks.size(); ++i)
      csv += r.label + "," + std::to_string(r.config.world.seed + i) + "," +
             std::to_string(r.ticks[i]) + "," + std::to_string(r.collisions) + "\n";
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream(out + "/" + name + ".csv") << csv;
    std::cout << "rows written to " << out << "/" << name << ".csv\n";
  }
  return 0;
}

int cmd_check(const std::string& out, const std::string& cli_path,
              const std::vector<int>& only) {
  harness::AcceptanceOptions opt;
  opt.cli_path = cli_path;
  opt.work_dir = out.empty() ? std::string("acceptance_out") : out;
  opt.only = only;
  auto results = harness::run_acceptance(opt);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("%s - criterion %2d [%6.2fs] %s: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.seconds, r.name.c_str(), r.details.c_str());
  }
  std::filesystem::create_directories(opt.work_dir);
  std::ofstream(opt.work_dir + "/acceptance_report.json")
      << harness::acceptance_report_json(results).dump(2) << "\n";
  std::cout << (all ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILURES PRESENT") << " (report: "
            << opt.work_dir << "/acceptance_report.json)\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmcov: multi-agent coverage experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, cli_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::vector<int> only;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config JSON");
    cmd->add_option("--seed", seed, "base world seed override");
    cmd->add_option("--seeds", seeds, "number of seeds override");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "report format: csv or jsonl");
  };

  CLI::App* run = app.add_subcommand("run", "run a coverage experiment");
  add_common(run);
  CLI::App* train = app.add_subcommand("train", "train a policy with REINFORCE");
  add_common(train);
  CLI::App* t1 = app.add_subcommand("bench-table1", "policy network sizing table");
  t1->add_option("--out", out_dir, "output directory");
  CLI::App* t2 = app.add_subcommand("bench-table2", "2D potential-field loss sweep");
  add_common(t2);
  CLI::App* t3 = app.add_subcommand("bench-table3", "3D potential-field loss sweep");
  add_common(t3);
  CLI::App* check = app.add_subcommand("check", "run the acceptance suite");
  check->add_option("--out", out_dir, "output directory");
  check->add_option("--cli", cli_path, "path to this binary for end-to-end checks");
  check->add_option("--only", only, "criterion ids to run (default all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || train->parsed()) {
      harness::ExperimentConfig cfg = load_or_default(config_path);
      apply_overrides(cfg, seed, seeds, out_dir, format);
      return run->parsed() ? cmd_run(cfg) : cmd_train(cfg);
    }
    if (t1->parsed()) return cmd_table1(out_dir);
    if (t2->parsed()) {
      auto rows = harness::bench_table2(seed.value_or(101), seeds.value_or(10), 2000);
      return emit_bench(rows, out_dir, "table2");
    }
    if (t3->parsed()) {
      auto rows = harness::bench_table3(seed.value_or(202), seeds.value_or(10), 2000);
      return emit_bench(rows, out_dir, "table3");
    }
    if (check->parsed()) return cmd_check(out_dir, cli_path, only);
  } catch (const swarmcov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
