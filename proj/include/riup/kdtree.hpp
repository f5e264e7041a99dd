// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "riup/errors.hpp"
#include "riup/point_cloud.hpp"

namespace riup {

/// Balanced 3D k-d tree over a point cloud, built by median splits. Queries
/// return the exact nearest neighbor (squared distances evaluated in double
/// exactly as squared_distance() does).
class KdTree {
 public:
  struct Hit {
    std::size_t index = 0;
    double squared_distance = std::numeric_limits<double>::infinity();
    double distance() const { return std::sqrt(squared_distance); }
  };

  explicit KdTree(const PointCloud& cloud) : points_(cloud.points) {
    if (points_.empty()) throw InvalidArgument("cannot build a k-d tree over an empty cloud");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    axis_.assign(points_.size(), 0);
    build(0, order_.size());
  }

  std::size_t size() const { return points_.size(); }
  const Point3f& point(std::size_t i) const { return points_[i]; }

  Hit nearest(const Point3f& query) const {
    Hit best;
    search(0, order_.size(), query, best);
    return best;
  }

 private:
  static float coord(const Point3f& p, int axis) { return axis == 0 ? p.x : (axis == 1 ? p.y : p.z); }

  // Subtree over order_[lo, hi) with its splitting point at the midpoint.
  void build(std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) return;
    float lo_c[3] = {std::numeric_limits<float>::max(), std::numeric_limits<float>::max(),
                     std::numeric_limits<float>::max()};
    float hi_c[3] = {std::numeric_limits<float>::lowest(), std::numeric_limits<float>::lowest(),
                     std::numeric_limits<float>::lowest()};
    for (std::size_t i = lo; i < hi; ++i) {
      for (int a = 0; a < 3; ++a) {
        lo_c[a] = std::min(lo_c[a], coord(points_[order_[i]], a));
        hi_c[a] = std::max(hi_c[a], coord(points_[order_[i]], a));
      }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (hi_c[a] - lo_c[a] > hi_c[axis] - lo_c[axis]) axis = a;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                       return coord(points_[a], axis) < coord(points_[b], axis);
                     });
    axis_[mid] = axis;
    build(lo, mid);
    build(mid + 1, hi);
  }

  void search(std::size_t lo, std::size_t hi, const Point3f& q, Hit& best) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t idx = order_[mid];
    const double d2 = squared_distance(q, points_[idx]);
    if (d2 < best.squared_distance || (d2 == best.squared_distance && idx < best.index)) best = {idx, d2};
    if (hi - lo == 1) return;
    const int axis = axis_[mid];
    const double diff = static_cast<double>(coord(q, axis)) - coord(points_[idx], axis);
    const bool left_first = diff < 0.0;
    if (left_first) search(lo, mid, q, best);
    else search(mid + 1, hi, q, best);
    if (diff * diff <= best.squared_distance) {
      if (left_first) search(mid + 1, hi, q, best);
      else search(lo, mid, q, best);
    }
  }

  std::vector<Point3f> points_;
  std::vector<std::size_t> order_;
  std::vector<int> axis_;
};

inline KdTree build_kdtree(const PointCloud& cloud) { return KdTree(cloud); }

}  // namespace riup
