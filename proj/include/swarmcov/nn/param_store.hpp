#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmcov/core.hpp"
#include "swarmcov/nn/tensor.hpp"

namespace swarmcov::nn {

// Named parameter tensors plus a parallel gradient accumulator of identical
// shapes. Iteration order is the (deterministic) insertion order.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor init) {
    if (params_.count(name)) throw std::invalid_argument("duplicate param: " + name);
    names_.push_back(name);
    grads_[name] = Tensor::zeros(init.shape);
    return params_[name] = std::move(init);
  }

  bool has(const std::string& name) const { return params_.count(name) != 0; }

  Tensor& param(const std::string& name) { return params_.at(name); }
  const Tensor& param(const std::string& name) const { return params_.at(name); }
  Tensor& grad(const std::string& name) { return grads_.at(name); }
  const Tensor& grad(const std::string& name) const { return grads_.at(name); }

  const std::vector<std::string>& names() const { return names_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& name : names_) n += params_.at(name).numel();
    return n;
  }

  void zero_grads() {
    for (auto& [name, g] : grads_)
      std::fill(g.data.begin(), g.data.end(), 0.0);
  }

  // Gradient ascent step: theta += lr * grad.
  void ascend(double lr) {
    for (const auto& name : names_) {
      auto& p = params_.at(name);
      const auto& g = grads_.at(name);
      for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] += lr * g.data[i];
    }
  }

  double grad_norm() const {
    double s = 0.0;
    for (const auto& [name, g] : grads_)
      for (double v : g.data) s += v * v;
    return std::sqrt(s);
  }

  bool grads_finite() const {
    for (const auto& [name, g] : grads_)
      if (!g.finite()) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& name : names_) {
      const auto& t = params_.at(name);
      params[name] = {{"shape", t.shape}, {"data", t.data}};
    }
    return {{"order", names_}, {"params", params}};
  }

  static ParamStore from_json(const nlohmann::json& j) {
    ParamStore ps;
    for (const auto& name : j.at("order").get<std::vector<std::string>>()) {
      const auto& pj = j.at("params").at(name);
      ps.add(name, Tensor(pj.at("shape").get<std::vector<std::size_t>>(),
                          pj.at("data").get<std::vector<double>>()));
    }
    return ps;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, Tensor> params_;
  std::map<std::string, Tensor> grads_;
};

}  // namespace swarmcov::nn
