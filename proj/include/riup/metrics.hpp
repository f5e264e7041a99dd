// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "riup/errors.hpp"
#include "riup/kdtree.hpp"
#include "riup/point_cloud.hpp"
#include "riup/range_image.hpp"

namespace riup {

/// 2D and 3D quality scores of one pipeline run.
struct QualityReport {
  double ssim = 0.0;
  double noise_ratio = 0.0;      // interpolated points farther than delta from the reference
  std::size_t densify_count = 0;  // interpolated points within delta of the reference
  std::size_t interpolated_count = 0;
  double chamfer = 0.0;
};

inline constexpr int kSsimWindow = 8;

/// Mean SSIM over all 8x8 windows (stride 1, uniform weights). Depths are
/// divided by max_depth; EMPTY counts as 0. C1 = 0.01^2, C2 = 0.03^2.
inline double ssim(const RangeImage& a, const RangeImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("ssim: dimension mismatch (" + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()) + ")");
  }
  const int w = a.width(), h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) throw InvalidArgument("ssim: image smaller than the 8x8 window");
  const double sa = 1.0 / a.geometry().max_depth;
  const double sb = 1.0 / b.geometry().max_depth;
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;

  // Summed-area tables of x, y, x^2, y^2 and xy with a zero border.
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<double> ix(stride * (h + 1)), iy(ix.size()), ixx(ix.size()), iyy(ix.size()), ixy(ix.size());
  for (int v = 0; v < h; ++v) {
    double rx = 0, ry = 0, rxx = 0, ryy = 0, rxy = 0;
    for (int u = 0; u < w; ++u) {
      const double x = a.at(v, u) * sa;
      const double y = b.at(v, u) * sb;
      rx += x;
      ry += y;
      rxx += x * x;
      ryy += y * y;
      rxy += x * y;
      const std::size_t k = (v + 1) * stride + (u + 1);
      const std::size_t up = v * stride + (u + 1);
      ix[k] = ix[up] + rx;
      iy[k] = iy[up] + ry;
      ixx[k] = ixx[up] + rxx;
      iyy[k] = iyy[up] + ryy;
      ixy[k] = ixy[up] + rxy;
    }
  }
  auto box = [&](const std::vector<double>& t, int v, int u) {
    const std::size_t v0 = v, v1 = v + kSsimWindow, u0 = u, u1 = u + kSsimWindow;
    return t[v1 * stride + u1] - t[v0 * stride + u1] - t[v1 * stride + u0] + t[v0 * stride + u0];
  };
  constexpr double n = kSsimWindow * kSsimWindow;
  double total = 0.0;
  for (int v = 0; v + kSsimWindow <= h; ++v) {
    for (int u = 0; u + kSsimWindow <= w; ++u) {
      const double mx = box(ix, v, u) / n;
      const double my = box(iy, v, u) / n;
      const double vx = box(ixx, v, u) / n - mx * mx;
      const double vy = box(iyy, v, u) / n - my * my;
      const double cxy = box(ixy, v, u) / n - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (static_cast<double>(h - kSsimWindow + 1) * (w - kSsimWindow + 1));
}

struct NoiseResult {
  double ratio = 0.0;
  std::size_t densify_count = 0;
};

/// Classifies interpolated points by their nearest-neighbor distance to the
/// ground truth, taken as the reference cloud together with the source
/// points. Points farther than delta are noise.
inline NoiseResult noise_ratio(const PointCloud& interpolated, const PointCloud& source_points,
                               const PointCloud& reference, double delta) {
  if (reference.empty()) throw InvalidArgument("noise_ratio: empty reference cloud");
  if (!(delta > 0.0)) throw InvalidArgument("noise_ratio: delta must be > 0");
  if (interpolated.empty()) return {};
  PointCloud truth = reference;
  truth.intensity.reset();
  truth.points.insert(truth.points.end(), source_points.points.begin(), source_points.points.end());
  const KdTree tree(truth);
  const double delta2 = delta * delta;
  NoiseResult out;
  for (const auto& p : interpolated.points) {
    if (tree.nearest(p).squared_distance <= delta2) ++out.densify_count;
  }
  out.ratio = static_cast<double>(interpolated.size() - out.densify_count) / static_cast<double>(interpolated.size());
  return out;
}

namespace detail {

inline double mean_nn_distance(const PointCloud& from, const KdTree& to) {
  double sum = 0.0;
  for (const auto& p : from.points) sum += to.nearest(p).distance();
  return sum / static_cast<double>(from.size());
}

}  // namespace detail

/// Symmetric mean nearest-neighbor distance in meters.
inline double chamfer(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("chamfer: both clouds must be non-empty");
  const KdTree ta(a), tb(b);
  return 0.5 * (detail::mean_nn_distance(a, tb) + detail::mean_nn_distance(b, ta));
}

}  // namespace riup
