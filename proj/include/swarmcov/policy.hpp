#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmcov/core.hpp"
#include "swarmcov/nn/graph.hpp"
#include "swarmcov/nn/param_store.hpp"
#include "swarmcov/world.hpp"

namespace swarmcov {

enum class PolicyVariant { Seq2Seq, Seq2SeqAttention, TransformerEnc, PointerNet };

inline std::string variant_name(PolicyVariant v) {
  switch (v) {
    case PolicyVariant::Seq2Seq: return "seq2seq";
    case PolicyVariant::Seq2SeqAttention: return "seq2seq_attention";
    case PolicyVariant::TransformerEnc: return "transformer";
    case PolicyVariant::PointerNet: return "pointer_net";
  }
  throw std::logic_error("variant_name: bad variant");
}

inline PolicyVariant variant_from_name(const std::string& s) {
  if (s == "seq2seq") return PolicyVariant::Seq2Seq;
  if (s == "seq2seq_attention") return PolicyVariant::Seq2SeqAttention;
  if (s == "transformer") return PolicyVariant::TransformerEnc;
  if (s == "pointer_net") return PolicyVariant::PointerNet;
  throw std::invalid_argument("unknown policy variant: " + s);
}

struct PolicyDims {
  std::size_t feat = 4;    // x, y, priority, is_drone
  std::size_t embed = 0;
  std::size_t hidden = 0;  // LSTM hidden width
  std::size_t heads = 4;   // transformer only
  std::size_t ff = 288;    // transformer feed-forward width
  std::size_t blocks = 2;  // transformer encoder blocks
  std::size_t n_poi = 25;
};

// Hidden widths chosen so the constructed parameter totals track the
// reference sizes of the four networks (see count_parameters tests).
inline PolicyDims default_dims(PolicyVariant v, std::size_t n_poi) {
  PolicyDims d;
  d.n_poi = n_poi;
  switch (v) {
    case PolicyVariant::Seq2Seq: d.embed = d.hidden = 56; break;
    case PolicyVariant::Seq2SeqAttention: d.embed = d.hidden = 70; break;
    case PolicyVariant::TransformerEnc: d.embed = 64; break;
    case PolicyVariant::PointerNet: d.embed = d.hidden = 60; break;
  }
  return d;
}

// Raw features for one assignment query: token 0 is the querying drone,
// tokens 1..n are the PoI in storage (row-major) order. Coordinates are
// normalized to [0, 1) by the world extent per axis.
struct AssignmentInput {
  std::vector<std::array<double, 4>> tokens;
  std::vector<bool> visited;  // one flag per PoI

  int n_poi() const { return static_cast<int>(tokens.size()) - 1; }
};

inline AssignmentInput encode_input(const WorldState& w, int drone_id) {
  if (drone_id < 0 || drone_id >= static_cast<int>(w.drones.size()))
    throw std::invalid_argument("encode_input: bad drone id");
  AssignmentInput in;
  const double e = w.config.extent;
  const Vec& dp = w.drones[static_cast<std::size_t>(drone_id)].position;
  in.tokens.push_back({dp[0] / e, dp[1] / e, 0.0, 1.0});
  for (const auto& poi : w.pois) {
    in.tokens.push_back(
        {poi.position[0] / e, poi.position[1] / e, poi.high_priority ? 1.0 : 0.0, 0.0});
    in.visited.push_back(poi.mapped);
  }
  return in;
}

struct Policy {
  PolicyVariant variant = PolicyVariant::PointerNet;
  PolicyDims dims;
  nn::ParamStore params;
};

namespace detail {

inline nn::Tensor init_matrix(std::size_t m, std::size_t n, Rng& rng) {
  nn::Tensor t = nn::Tensor::zeros({m, n});
  double bound = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : t.data) v = rng.uniform(-bound, bound);
  return t;
}

inline nn::Tensor init_vector(std::size_t n, double fill) {
  nn::Tensor t = nn::Tensor::zeros({n});
  std::fill(t.data.begin(), t.data.end(), fill);
  return t;
}

inline nn::Tensor init_uniform_vector(std::size_t n, Rng& rng) {
  nn::Tensor t = nn::Tensor::zeros({n});
  double bound = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : t.data) v = rng.uniform(-bound, bound);
  return t;
}

inline void add_lstm_layer(nn::ParamStore& ps, const std::string& prefix,
                           std::size_t input, std::size_t hidden, Rng& rng) {
  ps.add(prefix + ".w_ih", init_matrix(4 * hidden, input, rng));
  ps.add(prefix + ".w_hh", init_matrix(4 * hidden, hidden, rng));
  ps.add(prefix + ".b", init_vector(4 * hidden, 0.0));
}

}  // namespace detail

// Weights: uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; biases zero; layer
// norm gains one. Construction order is fixed, so a seed pins every weight.
inline Policy make_policy(PolicyVariant variant, const PolicyDims& dims,
                          std::uint64_t seed) {
  Policy p;
  p.variant = variant;
  p.dims = dims;
  Rng rng(seed);
  auto& ps = p.params;

  ps.add("embed.w", detail::init_matrix(dims.embed, dims.feat, rng));
  ps.add("embed.b", detail::init_vector(dims.embed, 0.0));

  if (variant == PolicyVariant::TransformerEnc) {
    for (std::size_t b = 0; b < dims.blocks; ++b) {
      std::string pre = "blk" + std::to_string(b);
      for (const char* w : {"wq", "wk", "wv", "wo"}) {
        ps.add(pre + ".attn." + w, detail::init_matrix(dims.embed, dims.embed, rng));
        ps.add(pre + ".attn." + w + std::string("_b"), detail::init_vector(dims.embed, 0.0));
      }
      ps.add(pre + ".ln1.gain", detail::init_vector(dims.embed, 1.0));
      ps.add(pre + ".ln1.bias", detail::init_vector(dims.embed, 0.0));
      ps.add(pre + ".ff.w1", detail::init_matrix(dims.ff, dims.embed, rng));
      ps.add(pre + ".ff.b1", detail::init_vector(dims.ff, 0.0));
      ps.add(pre + ".ff.w2", detail::init_matrix(dims.embed, dims.ff, rng));
      ps.add(pre + ".ff.b2", detail::init_vector(dims.embed, 0.0));
      ps.add(pre + ".ln2.gain", detail::init_vector(dims.embed, 1.0));
      ps.add(pre + ".ln2.bias", detail::init_vector(dims.embed, 0.0));
    }
    ps.add("score.w", detail::init_matrix(1, dims.embed, rng));
    ps.add("score.b", detail::init_vector(1, 0.0));
    return p;
  }

  detail::add_lstm_layer(ps, "enc.l0", dims.embed, dims.hidden, rng);
  detail::add_lstm_layer(ps, "enc.l1", dims.hidden, dims.hidden, rng);
  detail::add_lstm_layer(ps, "dec.l0", dims.embed, dims.hidden, rng);
  detail::add_lstm_layer(ps, "dec.l1", dims.hidden, dims.hidden, rng);
  ps.add("lw", detail::init_uniform_vector(dims.embed, rng));

  if (variant == PolicyVariant::Seq2Seq)
    ps.add("head.w", detail::init_matrix(dims.n_poi, dims.hidden, rng));
  else if (variant == PolicyVariant::Seq2SeqAttention)
    ps.add("head.w", detail::init_matrix(dims.n_poi, 2 * dims.hidden, rng));
  if (variant != PolicyVariant::PointerNet)
    ps.add("head.b", detail::init_vector(dims.n_poi, 0.0));
  return p;
}

inline Policy make_policy(PolicyVariant variant, std::size_t n_poi, std::uint64_t seed) {
  return make_policy(variant, default_dims(variant, n_poi), seed);
}

inline std::size_t count_parameters(PolicyVariant variant, const PolicyDims& dims) {
  return make_policy(variant, dims, 0).params.parameter_count();
}

struct DecodeResult {
  std::vector<int> choices;
  std::vector<nn::NodeRef> log_probs;
  std::vector<nn::Tensor> distributions;
};

using Chooser = std::function<int(const nn::Tensor& probs, int step)>;

namespace detail {

struct LstmState {
  nn::NodeRef h0, c0, h1, c1;
};

inline nn::NodeRef lstm_stack(nn::Graph& g, nn::ParamStore& ps, const std::string& pre,
                              nn::NodeRef input, LstmState& st) {
  auto [h0, c0] = g.lstm_step(input, st.h0, st.c0, g.param(ps, pre + ".l0.w_ih"),
                              g.param(ps, pre + ".l0.w_hh"), g.param(ps, pre + ".l0.b"));
  st.h0 = h0;
  st.c0 = c0;
  auto [h1, c1] = g.lstm_step(h0, st.h1, st.c1, g.param(ps, pre + ".l1.w_ih"),
                              g.param(ps, pre + ".l1.w_hh"), g.param(ps, pre + ".l1.b"));
  st.h1 = h1;
  st.c1 = c1;
  return h1;
}

// Multi-head self attention over the token sequence, then post-norm
// residual + feed-forward, per encoder block.
inline std::vector<nn::NodeRef> transformer_block(nn::Graph& g, nn::ParamStore& ps,
                                                  const std::string& pre,
                                                  const std::vector<nn::NodeRef>& x,
                                                  std::size_t d, std::size_t heads) {
  std::size_t hd = d / heads;
  double sc = 1.0 / std::sqrt(static_cast<double>(hd));
  nn::NodeRef wq = g.param(ps, pre + ".attn.wq"), bq = g.param(ps, pre + ".attn.wq_b");
  nn::NodeRef wk = g.param(ps, pre + ".attn.wk"), bk = g.param(ps, pre + ".attn.wk_b");
  nn::NodeRef wv = g.param(ps, pre + ".attn.wv"), bv = g.param(ps, pre + ".attn.wv_b");
  nn::NodeRef wo = g.param(ps, pre + ".attn.wo"), bo = g.param(ps, pre + ".attn.wo_b");

  std::vector<nn::NodeRef> q, k, v;
  for (const auto& t : x) {
    q.push_back(g.affine(wq, t, bq));
    k.push_back(g.affine(wk, t, bk));
    v.push_back(g.affine(wv, t, bv));
  }

  std::vector<nn::NodeRef> after_attn;
  std::vector<bool> no_mask(x.size(), false);
  for (std::size_t t = 0; t < x.size(); ++t) {
    nn::NodeRef merged{};
    for (std::size_t h = 0; h < heads; ++h) {
      nn::NodeRef qh = g.slice(q[t], h * hd, hd);
      std::vector<nn::NodeRef> scores;
      std::vector<nn::NodeRef> vals;
      for (std::size_t s = 0; s < x.size(); ++s) {
        scores.push_back(g.scale(g.dot(qh, g.slice(k[s], h * hd, hd)), sc));
        vals.push_back(g.slice(v[s], h * hd, hd));
      }
      nn::NodeRef w = g.softmax_masked(g.pack(scores), no_mask);
      nn::NodeRef ctx = g.weighted_sum(w, vals);
      merged = h == 0 ? ctx : g.concat(merged, ctx);
    }
    nn::NodeRef proj = g.affine(wo, merged, bo);
    after_attn.push_back(g.layer_norm(g.add(x[t], proj), g.param(ps, pre + ".ln1.gain"),
                                      g.param(ps, pre + ".ln1.bias")));
  }

  std::vector<nn::NodeRef> out;
  for (const auto& t : after_attn) {
    nn::NodeRef hdn = g.relu(g.affine(g.param(ps, pre + ".ff.w1"), t, g.param(ps, pre + ".ff.b1")));
    nn::NodeRef ff = g.affine(g.param(ps, pre + ".ff.w2"), hdn, g.param(ps, pre + ".ff.b2"));
    out.push_back(g.layer_norm(g.add(t, ff), g.param(ps, pre + ".ln2.gain"),
                               g.param(ps, pre + ".ln2.bias")));
  }
  return out;
}

}  // namespace detail

// Autoregressive decode. Emits one distribution over PoI per step; `choose`
// picks the next index (argmax, a random draw, or a recorded choice for
// training replay). With grow_mask the chosen index joins the visited mask,
// which is how assignment orders stay duplicate-free.
inline DecodeResult decode(const Policy& policy, const AssignmentInput& input,
                           nn::Graph& g, int steps, const Chooser& choose,
                           bool grow_mask) {
  const std::size_t n_poi = static_cast<std::size_t>(input.n_poi());
  if (policy.dims.n_poi < n_poi)
    throw std::invalid_argument("decode: policy sized for fewer PoI than the input");
  auto& ps = const_cast<nn::ParamStore&>(policy.params);

  DecodeResult res;
  std::vector<bool> mask = input.visited;

  // Shared token embeddings.
  nn::NodeRef we = g.param(ps, "embed.w");
  nn::NodeRef be = g.param(ps, "embed.b");
  std::vector<nn::NodeRef> emb;
  for (const auto& tok : input.tokens) {
    nn::NodeRef f = g.constant(nn::Tensor::vector({tok[0], tok[1], tok[2], tok[3]}));
    emb.push_back(g.tanh_op(g.affine(we, f, be)));
  }

  auto emit = [&](nn::NodeRef scores, int step) {
    // Networks sized for more PoI than the input provides mask the excess.
    std::vector<bool> m = mask;
    m.resize(g.value(scores).numel(), true);
    nn::Tensor dist = g.value(g.softmax_masked(scores, m));
    dist.data.resize(n_poi);
    dist.shape = {n_poi};
    int pick = choose(dist, step);
    if (pick < 0 || pick >= static_cast<int>(n_poi) || m[static_cast<std::size_t>(pick)])
      throw std::invalid_argument("decode: chooser picked a masked index");
    res.choices.push_back(pick);
    res.log_probs.push_back(g.log_softmax_pick(scores, m, static_cast<std::size_t>(pick)));
    res.distributions.push_back(std::move(dist));
    if (grow_mask) mask[static_cast<std::size_t>(pick)] = true;
    return pick;
  };

  if (policy.variant == PolicyVariant::TransformerEnc) {
    std::vector<nn::NodeRef> x = emb;
    for (std::size_t b = 0; b < policy.dims.blocks; ++b)
      x = detail::transformer_block(g, ps, "blk" + std::to_string(b), x,
                                    policy.dims.embed, policy.dims.heads);
    std::vector<nn::NodeRef> per_poi;
    for (std::size_t i = 0; i < n_poi; ++i)
      per_poi.push_back(g.affine(g.param(ps, "score.w"), x[1 + i], g.param(ps, "score.b")));
    nn::NodeRef scores = g.pack(per_poi);
    for (int s = 0; s < steps; ++s) emit(scores, s);
    return res;
  }

  // LSTM encoder over all tokens; the decoder starts from the encoder's
  // final state and is fed the embedding of the previously chosen PoI
  // (the learnable <LW> vector at the first step).
  const std::size_t H = policy.dims.hidden;
  nn::NodeRef zeroH = g.constant(nn::Tensor::zeros({H}));
  detail::LstmState enc{zeroH, zeroH, zeroH, zeroH};
  std::vector<nn::NodeRef> enc_top;
  for (const auto& e : emb) enc_top.push_back(detail::lstm_stack(g, ps, "enc", e, enc));

  detail::LstmState dec = enc;
  nn::NodeRef dec_in = g.param(ps, "lw");
  for (int s = 0; s < steps; ++s) {
    nn::NodeRef top = detail::lstm_stack(g, ps, "dec", dec_in, dec);
    nn::NodeRef scores;
    if (policy.variant == PolicyVariant::Seq2Seq) {
      scores = g.affine(g.param(ps, "head.w"), top, g.param(ps, "head.b"));
    } else if (policy.variant == PolicyVariant::Seq2SeqAttention) {
      nn::NodeRef ctx = g.attention(top, enc_top, enc_top).first;
      scores = g.affine(g.param(ps, "head.w"), g.concat(top, ctx), g.param(ps, "head.b"));
    } else {  // PointerNet: point back into the encoder states
      double sc = 1.0 / std::sqrt(static_cast<double>(H));
      std::vector<nn::NodeRef> ptr;
      for (std::size_t i = 0; i < n_poi; ++i)
        ptr.push_back(g.scale(g.dot(top, enc_top[1 + i]), sc));
      scores = g.pack(ptr);
    }
    int pick = emit(scores, s);
    dec_in = emb[static_cast<std::size_t>(1 + pick)];
  }
  return res;
}

inline int argmax(const nn::Tensor& t) {
  int best = 0;
  for (std::size_t i = 1; i < t.data.size(); ++i)
    if (t.data[i] > t.data[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

// Distributions for a fixed visited mask (the mask does not grow here; the
// decoder is fed its own greedy choices).
inline std::vector<nn::Tensor> forward(const Policy& policy, const AssignmentInput& input,
                                       int decode_steps) {
  nn::Graph g;
  auto res = decode(policy, input, g, decode_steps,
                    [](const nn::Tensor& p, int) { return argmax(p); }, false);
  return res.distributions;
}

enum class DecodeMode { Greedy, Sample };

// Order over the currently unmapped PoI for one drone.
inline std::vector<int> sample_assignment(const Policy& policy, const WorldState& w,
                                          int drone_id, Rng& rng, DecodeMode mode) {
  AssignmentInput input = encode_input(w, drone_id);
  int remaining = 0;
  for (bool v : input.visited)
    if (!v) ++remaining;
  if (remaining == 0) return {};
  nn::Graph g;
  Chooser choose = mode == DecodeMode::Greedy
                       ? Chooser([](const nn::Tensor& p, int) { return argmax(p); })
                       : Chooser([&rng](const nn::Tensor& p, int) {
                           return rng.categorical(p.data);
                         });
  return decode(policy, input, g, remaining, choose, true).choices;
}

inline std::vector<Policy> replicate(const Policy& policy, int n_agents) {
  if (n_agents < 1) throw std::invalid_argument("replicate: n_agents must be >= 1");
  return std::vector<Policy>(static_cast<std::size_t>(n_agents), policy);
}

}  // namespace swarmcov
