#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swarmcov/nn/param_store.hpp"
#include "swarmcov/nn/tensor.hpp"

namespace swarmcov::nn {

struct NodeRef {
  int id = -1;
};

// Reverse-mode tape. Each op computes its value eagerly and registers a
// hand-written backward rule; backward() replays the rules newest-first and
// flushes leaf gradients into their bound ParamStore accumulators. No
// external autodiff; every rule here is checked against finite differences
// in the test suite.
class Graph {
 public:
  NodeRef constant(Tensor v) { return push(std::move(v), {}); }

  NodeRef param(ParamStore& store, const std::string& name) {
    NodeRef r = push(store.param(name), {});
    nodes_[static_cast<std::size_t>(r.id)].store = &store;
    nodes_[static_cast<std::size_t>(r.id)].pname = name;
    return r;
  }

  const Tensor& value(NodeRef r) const { return nodes_.at(static_cast<std::size_t>(r.id)).value; }
  const Tensor& grad(NodeRef r) const { return nodes_.at(static_cast<std::size_t>(r.id)).grad; }

  std::size_t size() const { return nodes_.size(); }

  // y = W x + b
  NodeRef affine(NodeRef W, NodeRef x, NodeRef b) {
    const Tensor& w = value(W);
    const Tensor& xv = value(x);
    const Tensor& bv = value(b);
    if (w.shape.size() != 2 || w.cols() != xv.numel() || w.rows() != bv.numel())
      throw std::invalid_argument("affine: shape mismatch");
    std::size_t m = w.rows(), n = w.cols();
    Tensor y = Tensor::zeros({m});
    for (std::size_t i = 0; i < m; ++i) {
      double s = bv[i];
      for (std::size_t j = 0; j < n; ++j) s += w.at(i, j) * xv[j];
      y[i] = s;
    }
    return push(std::move(y), [this, W, x, b, m, n](Node& out) {
      auto& gw = nodes_[static_cast<std::size_t>(W.id)].grad;
      auto& gx = nodes_[static_cast<std::size_t>(x.id)].grad;
      auto& gb = nodes_[static_cast<std::size_t>(b.id)].grad;
      const auto& wv = nodes_[static_cast<std::size_t>(W.id)].value;
      const auto& xv = nodes_[static_cast<std::size_t>(x.id)].value;
      for (std::size_t i = 0; i < m; ++i) {
        double g = out.grad[i];
        gb[i] += g;
        for (std::size_t j = 0; j < n; ++j) {
          gw.data[i * n + j] += g * xv[j];
          gx[j] += wv.data[i * n + j] * g;
        }
      }
    });
  }

  NodeRef add(NodeRef a, NodeRef b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw std::invalid_argument("add: shape mismatch");
    Tensor y = av;
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += bv.data[i];
    return push(std::move(y), [this, a, b](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      auto& gb = nodes_[static_cast<std::size_t>(b.id)].grad;
      for (std::size_t i = 0; i < out.grad.data.size(); ++i) {
        ga.data[i] += out.grad.data[i];
        gb.data[i] += out.grad.data[i];
      }
    });
  }

  NodeRef mul(NodeRef a, NodeRef b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw std::invalid_argument("mul: shape mismatch");
    Tensor y = av;
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] *= bv.data[i];
    return push(std::move(y), [this, a, b](Node& out) {
      auto& na = nodes_[static_cast<std::size_t>(a.id)];
      auto& nb = nodes_[static_cast<std::size_t>(b.id)];
      for (std::size_t i = 0; i < out.grad.data.size(); ++i) {
        na.grad.data[i] += out.grad.data[i] * nb.value.data[i];
        nb.grad.data[i] += out.grad.data[i] * na.value.data[i];
      }
    });
  }

  NodeRef scale(NodeRef a, double s) {
    Tensor y = value(a);
    for (double& v : y.data) v *= s;
    return push(std::move(y), [this, a, s](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      for (std::size_t i = 0; i < out.grad.data.size(); ++i)
        ga.data[i] += s * out.grad.data[i];
    });
  }

  NodeRef sigmoid(NodeRef a) {
    Tensor y = value(a);
    for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
    return push(std::move(y), [this, a](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      for (std::size_t i = 0; i < out.grad.data.size(); ++i) {
        double yv = out.value.data[i];
        ga.data[i] += out.grad.data[i] * yv * (1.0 - yv);
      }
    });
  }

  NodeRef tanh_op(NodeRef a) {
    Tensor y = value(a);
    for (double& v : y.data) v = std::tanh(v);
    return push(std::move(y), [this, a](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      for (std::size_t i = 0; i < out.grad.data.size(); ++i) {
        double yv = out.value.data[i];
        ga.data[i] += out.grad.data[i] * (1.0 - yv * yv);
      }
    });
  }

  NodeRef relu(NodeRef a) {
    Tensor y = value(a);
    for (double& v : y.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(y), [this, a](Node& out) {
      auto& na = nodes_[static_cast<std::size_t>(a.id)];
      for (std::size_t i = 0; i < out.grad.data.size(); ++i)
        if (na.value.data[i] > 0.0) na.grad.data[i] += out.grad.data[i];
    });
  }

  NodeRef slice(NodeRef a, std::size_t off, std::size_t len) {
    const Tensor& av = value(a);
    if (off + len > av.numel()) throw std::invalid_argument("slice: out of range");
    Tensor y = Tensor::zeros({len});
    for (std::size_t i = 0; i < len; ++i) y[i] = av[off + i];
    return push(std::move(y), [this, a, off, len](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      for (std::size_t i = 0; i < len; ++i) ga.data[off + i] += out.grad.data[i];
    });
  }

  NodeRef concat(NodeRef a, NodeRef b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    Tensor y = Tensor::zeros({av.numel() + bv.numel()});
    for (std::size_t i = 0; i < av.numel(); ++i) y[i] = av[i];
    for (std::size_t i = 0; i < bv.numel(); ++i) y[av.numel() + i] = bv[i];
    std::size_t na = av.numel();
    return push(std::move(y), [this, a, b, na](Node& out) {
      auto& ga = nodes_[static_cast<std::size_t>(a.id)].grad;
      auto& gb = nodes_[static_cast<std::size_t>(b.id)].grad;
      for (std::size_t i = 0; i < na; ++i) ga.data[i] += out.grad.data[i];
      for (std::size_t i = 0; i < gb.data.size(); ++i) gb.data[i] += out.grad.data[na + i];
    });
  }

  NodeRef dot(NodeRef a, NodeRef b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (av.numel() != bv.numel()) throw std::invalid_argument("dot: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < av.numel(); ++i) s += av[i] * bv[i];
    return push(Tensor::scalar(s), [this, a, b](Node& out) {
      auto& na = nodes_[static_cast<std::size_t>(a.id)];
      auto& nb = nodes_[static_cast<std::size_t>(b.id)];
      double g = out.grad[0];
      for (std::size_t i = 0; i < na.value.numel(); ++i) {
        na.grad.data[i] += g * nb.value.data[i];
        nb.grad.data[i] += g * na.value.data[i];
      }
    });
  }

  // Gather scalars into one vector node.
  NodeRef pack(const std::vector<NodeRef>& scalars) {
    Tensor y = Tensor::zeros({scalars.size()});
    for (std::size_t i = 0; i < scalars.size(); ++i) y[i] = value(scalars[i])[0];
    return push(std::move(y), [this, scalars](Node& out) {
      for (std::size_t i = 0; i < scalars.size(); ++i)
        nodes_[static_cast<std::size_t>(scalars[i].id)].grad.data[0] += out.grad.data[i];
    });
  }

  // Weighted combination of the given scalar coefficients; the plain
  // summation case is coefs = 1.
  NodeRef sum_scalars(const std::vector<NodeRef>& scalars, const std::vector<double>& coefs) {
    if (scalars.size() != coefs.size()) throw std::invalid_argument("sum_scalars: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < scalars.size(); ++i) s += coefs[i] * value(scalars[i])[0];
    return push(Tensor::scalar(s), [this, scalars, coefs](Node& out) {
      for (std::size_t i = 0; i < scalars.size(); ++i)
        nodes_[static_cast<std::size_t>(scalars[i].id)].grad.data[0] +=
            coefs[i] * out.grad.data[0];
    });
  }

  // Max-stabilized softmax with a hard mask: masked entries are exactly 0 in
  // the output and receive no gradient.
  NodeRef softmax_masked(NodeRef z, const std::vector<bool>& mask) {
    const Tensor& zv = value(z);
    if (mask.size() != zv.numel()) throw std::invalid_argument("softmax: mask size mismatch");
    double mx = -HUGE_VAL;
    for (std::size_t i = 0; i < zv.numel(); ++i)
      if (!mask[i]) mx = std::max(mx, zv[i]);
    if (mx == -HUGE_VAL) throw std::invalid_argument("softmax: all entries masked");
    Tensor y = Tensor::zeros({zv.numel()});
    double total = 0.0;
    for (std::size_t i = 0; i < zv.numel(); ++i) {
      if (mask[i]) continue;
      y[i] = std::exp(zv[i] - mx);
      total += y[i];
    }
    for (std::size_t i = 0; i < zv.numel(); ++i) y[i] /= total;
    return push(std::move(y), [this, z, mask](Node& out) {
      auto& gz = nodes_[static_cast<std::size_t>(z.id)].grad;
      double dotgy = 0.0;
      for (std::size_t i = 0; i < out.value.numel(); ++i)
        dotgy += out.grad.data[i] * out.value.data[i];
      for (std::size_t i = 0; i < out.value.numel(); ++i) {
        if (mask[i]) continue;
        gz.data[i] += out.value.data[i] * (out.grad.data[i] - dotgy);
      }
    });
  }

  // log softmax(z)[pick] over the unmasked entries; the numerically stable
  // route for log-likelihood terms.
  NodeRef log_softmax_pick(NodeRef z, const std::vector<bool>& mask, std::size_t pick) {
    const Tensor& zv = value(z);
    if (mask.size() != zv.numel() || pick >= zv.numel() || mask[pick])
      throw std::invalid_argument("log_softmax_pick: bad mask/pick");
    double mx = -HUGE_VAL;
    for (std::size_t i = 0; i < zv.numel(); ++i)
      if (!mask[i]) mx = std::max(mx, zv[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < zv.numel(); ++i)
      if (!mask[i]) total += std::exp(zv[i] - mx);
    double logp = zv[pick] - mx - std::log(total);
    return push(Tensor::scalar(logp), [this, z, mask, pick, mx, total](Node& out) {
      auto& nz = nodes_[static_cast<std::size_t>(z.id)];
      double g = out.grad[0];
      for (std::size_t i = 0; i < nz.value.numel(); ++i) {
        if (mask[i]) continue;
        double p = std::exp(nz.value.data[i] - mx) / total;
        nz.grad.data[i] += g * ((i == pick ? 1.0 : 0.0) - p);
      }
    });
  }

  // y = gain * (x - mean) / sqrt(var + eps) + bias
  NodeRef layer_norm(NodeRef x, NodeRef gain, NodeRef bias) {
    const Tensor& xv = value(x);
    const Tensor& gv = value(gain);
    const Tensor& bv = value(bias);
    std::size_t n = xv.numel();
    if (n < 2 || gv.numel() != n || bv.numel() != n)
      throw std::invalid_argument("layer_norm: shape mismatch");
    double mean = 0.0;
    for (double v : xv.data) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : xv.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    double inv_std = 1.0 / std::sqrt(var + kLayerNormEps);
    Tensor xhat = Tensor::zeros({n});
    Tensor y = Tensor::zeros({n});
    for (std::size_t i = 0; i < n; ++i) {
      xhat[i] = (xv[i] - mean) * inv_std;
      y[i] = gv[i] * xhat[i] + bv[i];
    }
    return push(std::move(y), [this, x, gain, bias, xhat, inv_std, n](Node& out) {
      auto& gx = nodes_[static_cast<std::size_t>(x.id)].grad;
      auto& gg = nodes_[static_cast<std::size_t>(gain.id)].grad;
      auto& gb = nodes_[static_cast<std::size_t>(bias.id)].grad;
      const auto& gainv = nodes_[static_cast<std::size_t>(gain.id)].value;
      double mean_gxh = 0.0, mean_gxh_xhat = 0.0;
      std::vector<double> gxh(n);
      for (std::size_t i = 0; i < n; ++i) {
        gg.data[i] += out.grad.data[i] * xhat[i];
        gb.data[i] += out.grad.data[i];
        gxh[i] = out.grad.data[i] * gainv.data[i];
        mean_gxh += gxh[i];
        mean_gxh_xhat += gxh[i] * xhat[i];
      }
      mean_gxh /= static_cast<double>(n);
      mean_gxh_xhat /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        gx.data[i] += (gxh[i] - mean_gxh - xhat[i] * mean_gxh_xhat) * inv_std;
    });
  }

  // context = sum_i w_i * value_i, with w = softmax(q . k_i / sqrt(dim)).
  std::pair<NodeRef, NodeRef> attention(NodeRef query, const std::vector<NodeRef>& keys,
                                        const std::vector<NodeRef>& values) {
    if (keys.empty()) throw std::invalid_argument("attention: empty key set");
    if (keys.size() != values.size())
      throw std::invalid_argument("attention: key/value count mismatch");
    double sc = 1.0 / std::sqrt(static_cast<double>(value(query).numel()));
    std::vector<NodeRef> scores;
    scores.reserve(keys.size());
    for (const auto& k : keys) scores.push_back(scale(dot(query, k), sc));
    NodeRef w = softmax_masked(pack(scores), std::vector<bool>(keys.size(), false));
    return {weighted_sum(w, values), w};
  }

  NodeRef weighted_sum(NodeRef weights, const std::vector<NodeRef>& values) {
    const Tensor& wv = value(weights);
    if (wv.numel() != values.size())
      throw std::invalid_argument("weighted_sum: count mismatch");
    std::size_t d = value(values[0]).numel();
    Tensor y = Tensor::zeros({d});
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) y[j] += wv[i] * value(values[i])[j];
    return push(std::move(y), [this, weights, values, d](Node& out) {
      auto& gw = nodes_[static_cast<std::size_t>(weights.id)].grad;
      const auto& wv = nodes_[static_cast<std::size_t>(weights.id)].value;
      for (std::size_t i = 0; i < values.size(); ++i) {
        auto& nv = nodes_[static_cast<std::size_t>(values[i].id)];
        for (std::size_t j = 0; j < d; ++j) {
          gw.data[i] += out.grad.data[j] * nv.value.data[j];
          nv.grad.data[j] += wv.data[i] * out.grad.data[j];
        }
      }
    });
  }

  // One LSTM cell update. Gate layout in the stacked pre-activation vector
  // is [input, forget, output, candidate], each of width H:
  //   c' = f (*) c + i (*) cand,  h' = o (*) tanh(c')
  std::pair<NodeRef, NodeRef> lstm_step(NodeRef x, NodeRef h, NodeRef c, NodeRef w_ih,
                                        NodeRef w_hh, NodeRef b) {
    std::size_t hidden = value(c).numel();
    NodeRef zx = affine(w_ih, x, b);
    NodeRef zh = matvec(w_hh, h);
    NodeRef z = add(zx, zh);
    NodeRef i_gate = sigmoid(slice(z, 0, hidden));
    NodeRef f_gate = sigmoid(slice(z, hidden, hidden));
    NodeRef o_gate = sigmoid(slice(z, 2 * hidden, hidden));
    NodeRef cand = tanh_op(slice(z, 3 * hidden, hidden));
    NodeRef c_next = add(mul(f_gate, c), mul(i_gate, cand));
    NodeRef h_next = mul(o_gate, tanh_op(c_next));
    return {h_next, c_next};
  }

  NodeRef matvec(NodeRef W, NodeRef x) {
    const Tensor& w = value(W);
    if (w.shape.size() != 2 || w.cols() != value(x).numel())
      throw std::invalid_argument("matvec: shape mismatch");
    std::size_t m = w.rows(), n = w.cols();
    Tensor y = Tensor::zeros({m});
    const Tensor& xv = value(x);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += w.at(i, j) * xv[j];
      y[i] = s;
    }
    return push(std::move(y), [this, W, x, m, n](Node& out) {
      auto& gw = nodes_[static_cast<std::size_t>(W.id)].grad;
      auto& gx = nodes_[static_cast<std::size_t>(x.id)].grad;
      const auto& wv = nodes_[static_cast<std::size_t>(W.id)].value;
      const auto& xv = nodes_[static_cast<std::size_t>(x.id)].value;
      for (std::size_t i = 0; i < m; ++i) {
        double g = out.grad.data[i];
        for (std::size_t j = 0; j < n; ++j) {
          gw.data[i * n + j] += g * xv[j];
          gx.data[j] += wv.data[i * n + j] * g;
        }
      }
    });
  }

  // Seeds d(loss)/d(loss) = 1, replays the tape in reverse, then adds every
  // bound leaf's gradient into its ParamStore accumulator.
  void backward(NodeRef loss) {
    if (value(loss).numel() != 1) throw std::invalid_argument("backward: loss must be scalar");
    for (auto& n : nodes_) std::fill(n.grad.data.begin(), n.grad.data.end(), 0.0);
    nodes_[static_cast<std::size_t>(loss.id)].grad.data[0] = 1.0;
    for (int i = loss.id; i >= 0; --i) {
      auto& n = nodes_[static_cast<std::size_t>(i)];
      if (n.back) n.back(n);
    }
    for (auto& n : nodes_) {
      if (!n.store) continue;
      auto& acc = n.store->grad(n.pname);
      for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += n.grad.data[i];
    }
  }

  static constexpr double kLayerNormEps = 1e-5;

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Node&)> back;
    ParamStore* store = nullptr;
    std::string pname;
  };

  NodeRef push(Tensor v, std::function<void(Node&)> back) {
    Node n;
    n.grad = Tensor::zeros(v.shape);
    n.value = std::move(v);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return NodeRef{static_cast<int>(nodes_.size()) - 1};
  }

  std::vector<Node> nodes_;
};

}  // namespace swarmcov::nn
