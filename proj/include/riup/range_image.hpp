// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "riup/errors.hpp"
#include "riup/point_cloud.hpp"

namespace riup {

/// Depth value marking a pixel without a return. Valid depths are strictly
/// positive because min_depth > 0.
inline constexpr float kEmpty = 0.0f;

inline bool is_empty(float depth) { return depth == kEmpty; }

/// Equirectangular projection parameters. Angles in degrees, depths in meters.
struct RiGeometry {
  int width = 2048;
  int height = 64;
  double pitch_max = 2.0;
  double pitch_min = -24.8;
  double min_depth = 2.0;
  double max_depth = 120.0;

  void validate() const {
    if (width < 2 || height < 2) throw InvalidArgument("range image must be at least 2x2 pixels");
    if (!(pitch_min < pitch_max)) throw InvalidArgument("pitch_min must be below pitch_max");
    if (!(min_depth > 0.0) || !(min_depth < max_depth)) {
      throw InvalidArgument("depth range must satisfy 0 < min_depth < max_depth");
    }
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

  friend bool operator==(const RiGeometry&, const RiGeometry&) = default;
};

/// Row-major depth grid; row 0 is the top of the vertical field of view and
/// column 0 looks along yaw = +pi (behind the sensor, turning clockwise).
class RangeImage {
 public:
  RangeImage() : RangeImage(RiGeometry{}) {}

  explicit RangeImage(const RiGeometry& geometry) : geometry_(geometry) {
    geometry_.validate();
    depth_.assign(geometry_.pixel_count(), kEmpty);
  }

  RangeImage(const RiGeometry& geometry, std::vector<float> depth) : geometry_(geometry), depth_(std::move(depth)) {
    geometry_.validate();
    if (depth_.size() != geometry_.pixel_count()) {
      throw InvalidArgument("depth grid has " + std::to_string(depth_.size()) + " values, expected " +
                            std::to_string(geometry_.pixel_count()));
    }
  }

  const RiGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }

  float at(int row, int col) const { return depth_[index(row, col)]; }
  float& at(int row, int col) { return depth_[index(row, col)]; }

  const std::vector<float>& depth() const { return depth_; }
  std::vector<float>& depth() { return depth_; }

  /// Throws InvalidArgument if any non-empty depth lies outside the
  /// geometry's depth range or is not finite.
  void validate() const {
    for (float d : depth_) {
      if (is_empty(d)) continue;
      if (!std::isfinite(d) || d < geometry_.min_depth || d > geometry_.max_depth) {
        throw InvalidArgument("range image depth " + std::to_string(d) + " outside [min_depth, max_depth]");
      }
    }
  }

  friend bool operator==(const RangeImage&, const RangeImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(geometry_.width) + static_cast<std::size_t>(col);
  }

  RiGeometry geometry_;
  std::vector<float> depth_;
};

namespace detail {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

// Column and row of a direction, or -1 when the pitch is outside the FOV.
inline std::array<int, 2> pixel_of(double yaw, double pitch_deg, const RiGeometry& g) {
  if (pitch_deg < g.pitch_min || pitch_deg > g.pitch_max) return {-1, -1};
  const double fu = std::floor(0.5 * (1.0 - yaw / std::numbers::pi) * g.width);
  const double fv = std::floor((1.0 - (pitch_deg - g.pitch_min) / (g.pitch_max - g.pitch_min)) * g.height);
  const int u = static_cast<int>(std::clamp(fu, 0.0, static_cast<double>(g.width - 1)));
  const int v = static_cast<int>(std::clamp(fv, 0.0, static_cast<double>(g.height - 1)));
  return {u, v};
}

inline double pixel_center_yaw(int col, const RiGeometry& g) {
  return std::numbers::pi * (1.0 - 2.0 * (col + 0.5) / g.width);
}

inline double pixel_center_pitch_deg(int row, const RiGeometry& g) {
  return g.pitch_min + (1.0 - (row + 0.5) / g.height) * (g.pitch_max - g.pitch_min);
}

// Nudges float coordinates by single ulps until point_range() reproduces
// `range` exactly. The target interval is one ulp wide and each step moves
// the range by at most about one ulp, so a handful of steps suffice.
inline Point3f snap_to_range(Point3f p, float range) {
  for (int iter = 0; iter < 24; ++iter) {
    const float got = point_range(p);
    if (got == range) return p;
    std::array<float*, 3> axes{&p.x, &p.y, &p.z};
    std::sort(axes.begin(), axes.end(), [](float* a, float* b) { return std::fabs(*a) > std::fabs(*b); });
    float* axis = axes[static_cast<std::size_t>(std::min(iter / 8, 2))];
    const bool grow = got < range;
    const float away = std::copysign(std::numeric_limits<float>::infinity(), *axis);
    *axis = std::nextafter(*axis, grow ? away : -away);
  }
  return p;
}

}  // namespace detail

/// Spherical projection. The nearest return wins when several points share a
/// pixel; points outside the depth range or vertical FOV are dropped.
inline RangeImage cloud_to_ri(const PointCloud& cloud, const RiGeometry& geom) {
  cloud.validate();
  RangeImage ri(geom);
  for (const auto& p : cloud.points) {
    const float r = point_range(p);
    if (r < geom.min_depth || r > geom.max_depth) continue;
    const double yaw = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
    const double pitch = std::asin(std::clamp(static_cast<double>(p.z) / r, -1.0, 1.0)) / detail::kDegToRad;
    const auto [u, v] = detail::pixel_of(yaw, pitch, geom);
    if (u < 0) continue;
    float& cell = ri.at(v, u);
    if (is_empty(cell) || r < cell) cell = r;
  }
  return ri;
}

/// Position of a pixel's return on its pixel-center ray. The stored float
/// depth is reproduced exactly by point_range() of the result.
inline Point3f pixel_to_point(int row, int col, float depth, const RiGeometry& g) {
  const double yaw = detail::pixel_center_yaw(col, g);
  const double pitch = detail::pixel_center_pitch_deg(row, g) * detail::kDegToRad;
  const double r = depth;
  Point3f p{static_cast<float>(r * std::cos(pitch) * std::cos(yaw)),
            static_cast<float>(r * std::cos(pitch) * std::sin(yaw)), static_cast<float>(r * std::sin(pitch))};
  return detail::snap_to_range(p, depth);
}

/// One point per non-empty pixel, in row-major pixel order.
inline PointCloud ri_to_cloud(const RangeImage& ri) {
  PointCloud cloud;
  for (int v = 0; v < ri.height(); ++v) {
    for (int u = 0; u < ri.width(); ++u) {
      const float d = ri.at(v, u);
      if (!is_empty(d)) cloud.points.push_back(pixel_to_point(v, u, d, ri.geometry()));
    }
  }
  return cloud;
}

inline double occupancy(const RangeImage& ri) {
  const auto filled = std::count_if(ri.depth().begin(), ri.depth().end(), [](float d) { return !is_empty(d); });
  return static_cast<double>(filled) / static_cast<double>(ri.geometry().pixel_count());
}

}  // namespace riup
