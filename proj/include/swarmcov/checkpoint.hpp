#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "swarmcov/core.hpp"
#include "swarmcov/policy.hpp"

namespace swarmcov {

// Versioned JSON checkpoint: variant and dims ride along with the raw
// ParamStore so a load can verify it matches the requesting architecture.
inline nlohmann::json checkpoint_json(const Policy& p) {
  return {{"version", 1},
          {"variant", variant_name(p.variant)},
          {"dims",
           {{"feat", p.dims.feat},
            {"embed", p.dims.embed},
            {"hidden", p.dims.hidden},
            {"heads", p.dims.heads},
            {"ff", p.dims.ff},
            {"blocks", p.dims.blocks},
            {"n_poi", p.dims.n_poi}}},
          {"params", p.params.to_json()}};
}

inline void save_checkpoint(const Policy& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint: " + path);
  out << checkpoint_json(p).dump();
}

inline Policy policy_from_checkpoint_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1) throw ConfigError("unsupported checkpoint version");
  Policy p;
  p.variant = variant_from_name(j.at("variant").get<std::string>());
  const auto& d = j.at("dims");
  p.dims.feat = d.at("feat").get<std::size_t>();
  p.dims.embed = d.at("embed").get<std::size_t>();
  p.dims.hidden = d.at("hidden").get<std::size_t>();
  p.dims.heads = d.at("heads").get<std::size_t>();
  p.dims.ff = d.at("ff").get<std::size_t>();
  p.dims.blocks = d.at("blocks").get<std::size_t>();
  p.dims.n_poi = d.at("n_poi").get<std::size_t>();
  p.params = nn::ParamStore::from_json(j.at("params"));
  // The stored tensors must be exactly the set a fresh net of these dims has.
  Policy probe = make_policy(p.variant, p.dims, 0);
  if (probe.params.names() != p.params.names())
    throw ConfigError("checkpoint does not match the declared variant/dims");
  return p;
}

inline Policy load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("checkpoint parse error: " + std::string(e.what()));
  }
  return policy_from_checkpoint_json(j);
}

}  // namespace swarmcov
