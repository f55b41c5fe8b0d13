#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>

#include <json.hpp>

#include "swarmcov/core.hpp"
#include "swarmcov/planners/coverage.hpp"
#include "swarmcov/policy.hpp"
#include "swarmcov/reinforce.hpp"
#include "swarmcov/world.hpp"

namespace swarmcov::harness {

struct PolicySource {
  enum class Kind { Random, Train, Checkpoint };
  Kind kind = Kind::Random;
  PolicyVariant variant = PolicyVariant::PointerNet;
  std::string checkpoint;
  DecodeMode decode_mode = DecodeMode::Greedy;
  bool replan = false;  // re-decode the order whenever a target was pre-mapped
};

struct TrainSpec {
  TrainConfig cfg;
  int episodes = 2000;
  int checkpoint_every = 100;  // updates between checkpoint saves
  int eval_seeds = 10;
};

struct ExperimentConfig {
  WorldConfig world;
  PolicySource policy;
  plan::PlannerKind planner_kind = plan::PlannerKind::PotentialField;
  plan::PlannerConfig planner;
  TrainSpec train;
  int n_seeds = 1;
  int max_ticks = 2000;
  std::string out_dir = "out";
  std::string format = "csv";
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError(path + ": unknown key \"" + key + "\"");
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

}  // namespace detail

inline WorldConfig world_from_json(const nlohmann::json& j, const std::string& path) {
  detail::check_keys(j, path,
                     {"dims", "extent", "n_drones", "n_poi", "high_priority_count",
                      "obstacle_density", "fov_edge", "gamma", "alpha_reward", "seed"});
  WorldConfig w;
  detail::read(j, "dims", w.dims, path);
  detail::read(j, "extent", w.extent, path);
  detail::read(j, "n_drones", w.n_drones, path);
  detail::read(j, "n_poi", w.n_poi, path);
  detail::read(j, "high_priority_count", w.high_priority_count, path);
  detail::read(j, "obstacle_density", w.obstacle_density, path);
  detail::read(j, "fov_edge", w.fov_edge, path);
  detail::read(j, "gamma", w.gamma, path);
  detail::read(j, "alpha_reward", w.alpha_reward, path);
  detail::read(j, "seed", w.seed, path);
  return w;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  detail::check_keys(j, "config",
                     {"world", "policy", "planner", "train", "n_seeds", "max_ticks",
                      "out_dir", "format"});
  ExperimentConfig c;
  if (j.contains("world")) c.world = world_from_json(j.at("world"), "world");

  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    detail::check_keys(p, "policy",
                       {"source", "variant", "checkpoint", "decode_mode", "replan"});
    std::string source = "random", mode = "greedy", variant = "pointer_net";
    detail::read(p, "source", source, "policy");
    detail::read(p, "variant", variant, "policy");
    detail::read(p, "checkpoint", c.policy.checkpoint, "policy");
    detail::read(p, "decode_mode", mode, "policy");
    detail::read(p, "replan", c.policy.replan, "policy");
    if (source == "random") c.policy.kind = PolicySource::Kind::Random;
    else if (source == "train") c.policy.kind = PolicySource::Kind::Train;
    else if (source == "checkpoint") c.policy.kind = PolicySource::Kind::Checkpoint;
    else throw ConfigError("policy.source: must be random, train, or checkpoint");
    c.policy.variant = variant_from_name(variant);
    if (mode == "greedy") c.policy.decode_mode = DecodeMode::Greedy;
    else if (mode == "sample") c.policy.decode_mode = DecodeMode::Sample;
    else throw ConfigError("policy.decode_mode: must be greedy or sample");
    if (c.policy.kind == PolicySource::Kind::Checkpoint && c.policy.checkpoint.empty())
      throw ConfigError("policy.checkpoint: required when source is checkpoint");
  }

  // Planner defaults are tied to the world FoV: repulsion range d/2 and
  // noise magnitude 0.1 * d/2 unless given explicitly.
  c.planner.fov_edge = c.world.fov_edge;
  c.planner.gamma = c.world.gamma;
  c.planner.repulsion_range = c.planner.fov_edge / 2.0;
  c.planner.noise_magnitude = 0.1 * (c.planner.fov_edge / 2.0);
  if (j.contains("planner")) {
    const auto& p = j.at("planner");
    detail::check_keys(p, "planner",
                       {"kind", "loss", "huber_delta", "alpha", "beta", "repulsion_range",
                        "repulsive_scale", "noise_threshold", "noise_magnitude",
                        "step_scale"});
    std::string kind = "potential_field", loss = "huber";
    detail::read(p, "kind", kind, "planner");
    detail::read(p, "loss", loss, "planner");
    if (kind == "potential_field") c.planner_kind = plan::PlannerKind::PotentialField;
    else if (kind == "wavefront") c.planner_kind = plan::PlannerKind::Wavefront;
    else throw ConfigError("planner.kind: must be potential_field or wavefront");
    c.planner.loss = plan::loss_from_name(loss);
    detail::read(p, "huber_delta", c.planner.huber_delta, "planner");
    detail::read(p, "alpha", c.planner.alpha, "planner");
    detail::read(p, "beta", c.planner.beta, "planner");
    detail::read(p, "repulsion_range", c.planner.repulsion_range, "planner");
    detail::read(p, "repulsive_scale", c.planner.repulsive_scale, "planner");
    detail::read(p, "noise_threshold", c.planner.noise_threshold, "planner");
    detail::read(p, "noise_magnitude", c.planner.noise_magnitude, "planner");
    detail::read(p, "step_scale", c.planner.step_scale, "planner");
  }
  c.planner.validate();

  if (j.contains("train")) {
    const auto& t = j.at("train");
    detail::check_keys(t, "train",
                       {"learning_rate", "baseline", "baseline_decay", "episodes_per_update",
                        "max_episode_steps", "seed", "episodes", "checkpoint_every",
                        "eval_seeds"});
    detail::read(t, "learning_rate", c.train.cfg.learning_rate, "train");
    std::string baseline = "moving_average";
    detail::read(t, "baseline", baseline, "train");
    if (baseline == "none") c.train.cfg.baseline = BaselineKind::None;
    else if (baseline == "moving_average") c.train.cfg.baseline = BaselineKind::MovingAverage;
    else throw ConfigError("train.baseline: must be none or moving_average");
    detail::read(t, "baseline_decay", c.train.cfg.baseline_decay, "train");
    detail::read(t, "episodes_per_update", c.train.cfg.episodes_per_update, "train");
    detail::read(t, "max_episode_steps", c.train.cfg.max_episode_steps, "train");
    detail::read(t, "seed", c.train.cfg.seed, "train");
    detail::read(t, "episodes", c.train.episodes, "train");
    detail::read(t, "checkpoint_every", c.train.checkpoint_every, "train");
    detail::read(t, "eval_seeds", c.train.eval_seeds, "train");
    if (c.train.cfg.learning_rate <= 0.0) throw ConfigError("train.learning_rate: must be > 0");
    if (c.train.cfg.baseline_decay <= 0.0 || c.train.cfg.baseline_decay >= 1.0)
      throw ConfigError("train.baseline_decay: must be in (0, 1)");
  }

  detail::read(j, "n_seeds", c.n_seeds, "config");
  detail::read(j, "max_ticks", c.max_ticks, "config");
  detail::read(j, "out_dir", c.out_dir, "config");
  detail::read(j, "format", c.format, "config");
  if (c.n_seeds < 1) throw ConfigError("n_seeds: must be >= 1");
  if (c.max_ticks < 0) throw ConfigError("max_ticks: must be >= 0");
  if (c.format != "csv" && c.format != "jsonl")
    throw ConfigError("format: must be csv or jsonl");
  return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["world"] = swarmcov::to_json(c.world);
  j["policy"] = {
      {"source", c.policy.kind == PolicySource::Kind::Random
                     ? "random"
                     : (c.policy.kind == PolicySource::Kind::Train ? "train" : "checkpoint")},
      {"variant", variant_name(c.policy.variant)},
      {"checkpoint", c.policy.checkpoint},
      {"decode_mode", c.policy.decode_mode == DecodeMode::Greedy ? "greedy" : "sample"},
      {"replan", c.policy.replan}};
  j["planner"] = {
      {"kind", c.planner_kind == plan::PlannerKind::PotentialField ? "potential_field"
                                                                   : "wavefront"},
      {"loss", plan::loss_name(c.planner.loss)},
      {"huber_delta", c.planner.huber_delta},
      {"alpha", c.planner.alpha},
      {"beta", c.planner.beta},
      {"repulsion_range", c.planner.repulsion_range},
      {"repulsive_scale", c.planner.repulsive_scale},
      {"noise_threshold", c.planner.noise_threshold},
      {"noise_magnitude", c.planner.noise_magnitude},
      {"step_scale", c.planner.step_scale}};
  j["train"] = {{"learning_rate", c.train.cfg.learning_rate},
                {"baseline", c.train.cfg.baseline == BaselineKind::None ? "none"
                                                                        : "moving_average"},
                {"baseline_decay", c.train.cfg.baseline_decay},
                {"episodes_per_update", c.train.cfg.episodes_per_update},
                {"max_episode_steps", c.train.cfg.max_episode_steps},
                {"seed", c.train.cfg.seed},
                {"episodes", c.train.episodes},
                {"checkpoint_every", c.train.checkpoint_every},
                {"eval_seeds", c.train.eval_seeds}};
  j["n_seeds"] = c.n_seeds;
  j["max_ticks"] = c.max_ticks;
  j["out_dir"] = c.out_dir;
  j["format"] = c.format;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace swarmcov::harness
