#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmcov {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 2- or 3-component point/displacement in world units (grid cells).
struct Vec {
  int dim = 2;
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] *= s;
    return r;
  }
  bool operator==(const Vec& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }

  double norm() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += c[i] * c[i];
    return std::sqrt(s);
  }
};

inline Vec vec2(double x, double y) { return Vec{2, {x, y, 0.0}}; }
inline Vec vec3(double x, double y, double z) { return Vec{3, {x, y, z}}; }

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

// Deterministic RNG. The engine is mt19937_64 and every derived draw
// (ints, reals, shuffles) is mapped by hand so a seed pins the exact
// stream independent of the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // k distinct indices from [0, n), order randomized (partial Fisher-Yates).
  std::vector<int> sample_indices(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + uniform_int(n - i);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

  // Draw an index from an (unnormalized is fine) non-negative weight vector.
  // Zero-weight entries are never selected.
  int categorical(const std::vector<double>& w) {
    double total = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      total += w[i];
      if (w[i] > 0.0) last_positive = static_cast<int>(i);
    }
    if (last_positive < 0) throw std::invalid_argument("categorical: no positive weight");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc && w[i] > 0.0) return static_cast<int>(i);
    }
    return last_positive;
  }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

}  // namespace swarmcov
