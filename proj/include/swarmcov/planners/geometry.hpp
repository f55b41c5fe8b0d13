#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swarmcov/core.hpp"

namespace swarmcov::plan {

// Axis-aligned box; doubles as obstacle footprint and drone FoV.
struct AABox {
  Vec center;
  Vec half;  // per-axis half extents, all > 0

  double lo(int axis) const { return center[axis] - half[axis]; }
  double hi(int axis) const { return center[axis] + half[axis]; }

  double measure() const {  // area in 2D, volume in 3D
    double m = 1.0;
    for (int i = 0; i < center.dim; ++i) m *= 2.0 * half[i];
    return m;
  }

  bool contains(const Vec& p) const {
    for (int i = 0; i < center.dim; ++i)
      if (p[i] < lo(i) || p[i] > hi(i)) return false;
    return true;
  }

  // Closest point of the box to p (p itself when inside).
  Vec nearest_point(const Vec& p) const {
    Vec q = p;
    for (int i = 0; i < center.dim; ++i) q[i] = clamp(p[i], lo(i), hi(i));
    return q;
  }

  double distance_to(const Vec& p) const { return (p - nearest_point(p)).norm(); }
};

inline AABox fov_box(const Vec& pos, double edge) {
  AABox b;
  b.center = pos;
  b.half = pos;
  for (int i = 0; i < pos.dim; ++i) b.half[i] = edge / 2.0;
  return b;
}

// Intersection measure of two boxes: product over axes of the overlap extent.
inline double box_overlap(const AABox& a, const AABox& b) {
  if (a.center.dim != b.center.dim)
    throw std::invalid_argument("box_overlap: dimensionality mismatch");
  double m = 1.0;
  for (int i = 0; i < a.center.dim; ++i) {
    double ext = std::min(a.hi(i), b.hi(i)) - std::max(a.lo(i), b.lo(i));
    if (ext <= 0.0) return 0.0;
    m *= ext;
  }
  return m;
}

// delta = K / (K + alpha * overlap^beta) * d/2, where K is the FoV measure
// and overlap is the perceived (intersected) size of the obstacle. Zero
// overlap leaves the full d/2 step; larger perceived obstacles shrink it.
inline double adaptive_delta(double fov_measure, double overlap, double alpha,
                             double beta, double fov_edge) {
  if (fov_measure <= 0.0) throw std::invalid_argument("adaptive_delta: K must be > 0");
  if (overlap < 0.0 || overlap > fov_measure)
    throw std::invalid_argument("adaptive_delta: overlap outside [0, K]");
  return fov_measure / (fov_measure + alpha * std::pow(overlap, beta)) *
         (fov_edge / 2.0);
}

}  // namespace swarmcov::plan
