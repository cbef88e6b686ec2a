#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the library routines it is used to check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "polyarena/geometry.hpp"

namespace polyarena::testing {

/// Convex CCW polygon: sorted random angles on a jittered circle.
inline std::vector<Vec2> random_convex_polygon(std::mt19937_64& rng, Vec2 center, double radius, int min_sides = 3,
                                               int max_sides = 9) {
  std::uniform_int_distribution<int> sides_dist(min_sides, max_sides);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
  for (;;) {
    const int n = sides_dist(rng);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = angle_dist(rng);
    std::sort(angles.begin(), angles.end());
    // Reject slivers: require every gap to be at least a few degrees and
    // no gap of pi or more (the centre must stay inside).
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const double next = i + 1 < n ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi;
      const double gap = next - angles[i];
      if (gap < 0.1 || gap >= std::numbers::pi - 0.05) ok = false;
    }
    if (!ok) continue;
    std::vector<Vec2> v;
    for (const double a : angles) v.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    return v;
  }
}

/// Winding number of a closed polyline around `p`, by summed signed angles.
inline int winding_number(Vec2 p, const std::vector<Vec2>& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a{v[i].x - p.x, v[i].y - p.y};
    const Vec2 b{v[(i + 1) % v.size()].x - p.x, v[(i + 1) % v.size()].y - p.y};
    total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/// x-extent of a convex polygon along the horizontal line at height y.
inline bool convex_row_extent(const std::vector<Vec2>& v, double y, double& x_lo, double& x_hi) {
  x_lo = std::numeric_limits<double>::infinity();
  x_hi = -x_lo;
  bool hit = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % v.size()];
    if ((a.y <= y && y <= b.y) || (b.y <= y && y <= a.y)) {
      if (a.y == b.y) {
        x_lo = std::min({x_lo, a.x, b.x});
        x_hi = std::max({x_hi, a.x, b.x});
      } else {
        const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
      }
      hit = true;
    }
  }
  return hit;
}

struct PlanarMoments {
  double area = 0.0;
  Vec2 centroid;
  double polar_about_centroid = 0.0;  ///< integral of r^2 dA about the centroid
};

/// Double integral over a convex polygon: midpoint rule in y, exact in x.
inline PlanarMoments integrate_moments(const std::vector<Vec2>& v, int rows = 20000) {
  double y_lo = v[0].y, y_hi = v[0].y;
  for (const Vec2& p : v) {
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  const double h = (y_hi - y_lo) / rows;
  double area = 0.0, mx = 0.0, my = 0.0, ixx = 0.0, iyy = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double y = y_lo + (r + 0.5) * h;
    double a, b;
    if (!convex_row_extent(v, y, a, b)) continue;
    const double w = b - a;
    area += w * h;
    mx += 0.5 * (b * b - a * a) * h;
    my += y * w * h;
    ixx += (b * b * b - a * a * a) / 3.0 * h;
    iyy += y * y * w * h;
  }
  PlanarMoments m;
  m.area = area;
  m.centroid = {mx / area, my / area};
  // Parallel-axis shift to the centroid.
  m.polar_about_centroid = ixx + iyy - area * (m.centroid.x * m.centroid.x + m.centroid.y * m.centroid.y);
  return m;
}

/// Separating-axis overlap test for convex polygons in either winding.
/// Touching boundaries do not count as overlap.
inline bool convex_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  const auto separated_along_edges = [](const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Vec2 e{p[(i + 1) % p.size()].x - p[i].x, p[(i + 1) % p.size()].y - p[i].y};
      const Vec2 n{-e.y, e.x};
      double p_lo = INFINITY, p_hi = -INFINITY, q_lo = INFINITY, q_hi = -INFINITY;
      for (const Vec2& v : p) {
        const double d = n.x * v.x + n.y * v.y;
        p_lo = std::min(p_lo, d);
        p_hi = std::max(p_hi, d);
      }
      for (const Vec2& v : q) {
        const double d = n.x * v.x + n.y * v.y;
        q_lo = std::min(q_lo, d);
        q_hi = std::max(q_hi, d);
      }
      if (p_hi <= q_lo || q_hi <= p_lo) return true;
    }
    return false;
  };
  return !separated_along_edges(a, b) && !separated_along_edges(b, a);
}

}  // namespace polyarena::testing
