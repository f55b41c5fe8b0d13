#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace swarmcov::plan {

// Per-coordinate cost kinds for the potential field planner. The Huber kinds
// share one formula; they differ in where delta comes from (a fixed config
// value vs. the FoV-overlap scaling rule).
enum class LossKind { L1, MSE, LogCosh, HuberFixed, HuberAdaptive };

// log(cosh(r)), overflow-safe for large |r|: |r| + log1p(e^{-2|r|}) - log 2.
inline double log_cosh(double r) {
  double a = std::abs(r);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

inline double huber(double r, double delta) {
  double a = std::abs(r);
  return a < delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

// Saturates at +/- delta; this is what caps the per-axis step size.
inline double huber_grad(double r, double delta) {
  if (std::abs(r) < delta) return r;
  return r > 0.0 ? delta : -delta;
}

inline bool is_huber(LossKind k) {
  return k == LossKind::HuberFixed || k == LossKind::HuberAdaptive;
}

// delta_eff is read only by the Huber kinds.
inline double loss_eval(LossKind kind, double r, double delta_eff) {
  switch (kind) {
    case LossKind::L1: return std::abs(r);
    case LossKind::MSE: return r * r;
    case LossKind::LogCosh: return log_cosh(r);
    case LossKind::HuberFixed:
    case LossKind::HuberAdaptive: return huber(r, delta_eff);
  }
  throw std::logic_error("loss_eval: bad kind");
}

// L1 subgradient at 0 is taken as 0: the gamma-ball mapping rule stops a
// drone before the kink matters, and 0 keeps converged axes at rest.
inline double loss_grad(LossKind kind, double r, double delta_eff) {
  switch (kind) {
    case LossKind::L1: return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    case LossKind::MSE: return 2.0 * r;
    case LossKind::LogCosh: return std::tanh(r);
    case LossKind::HuberFixed:
    case LossKind::HuberAdaptive: return huber_grad(r, delta_eff);
  }
  throw std::logic_error("loss_grad: bad kind");
}

inline std::string loss_name(LossKind k) {
  switch (k) {
    case LossKind::L1: return "l1";
    case LossKind::MSE: return "mse";
    case LossKind::LogCosh: return "log_cosh";
    case LossKind::HuberFixed: return "huber";
    case LossKind::HuberAdaptive: return "huber_adaptive";
  }
  throw std::logic_error("loss_name: bad kind");
}

inline LossKind loss_from_name(const std::string& s) {
  if (s == "l1") return LossKind::L1;
  if (s == "mse") return LossKind::MSE;
  if (s == "log_cosh") return LossKind::LogCosh;
  if (s == "huber") return LossKind::HuberFixed;
  if (s == "huber_adaptive") return LossKind::HuberAdaptive;
  throw std::invalid_argument("unknown loss kind: " + s);
}

}  // namespace swarmcov::plan
