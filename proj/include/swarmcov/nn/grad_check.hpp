#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "swarmcov/nn/tensor.hpp"

namespace swarmcov::nn {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  bool pass = false;
};

// Central finite differences against an analytic gradient. Relative error
// per coordinate is |num - ana| / max(1, |num|, |ana|).
inline GradCheckReport grad_check(const std::function<double(const Tensor&)>& f,
                                  const Tensor& point, const Tensor& analytic,
                                  double tolerance, double h = 1e-5) {
  GradCheckReport rep;
  Tensor x = point;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double orig = x.data[i];
    x.data[i] = orig + h;
    double fp = f(x);
    x.data[i] = orig - h;
    double fm = f(x);
    x.data[i] = orig;
    double num = (fp - fm) / (2.0 * h);
    double ana = analytic.data[i];
    double denom = std::max(1.0, std::max(std::abs(num), std::abs(ana)));
    double rel = std::abs(num - ana) / denom;
    if (rel > rep.max_rel_err) {
      rep.max_rel_err = rel;
      rep.worst_index = i;
    }
  }
  rep.pass = rep.max_rel_err < tolerance;
  return rep;
}

}  // namespace swarmcov::nn
