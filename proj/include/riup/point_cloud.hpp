// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "riup/errors.hpp"

namespace riup {

struct Point3f {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;

  friend bool operator==(const Point3f&, const Point3f&) = default;
};

/// Euclidean norm of a point, evaluated in double and rounded once to float.
/// Every range computation in the library goes through this function so that
/// projection and reconstruction agree bit for bit.
inline float point_range(const Point3f& p) {
  const double x = p.x, y = p.y, z = p.z;
  return static_cast<float>(std::sqrt(x * x + y * y + z * z));
}

inline double squared_distance(const Point3f& a, const Point3f& b) {
  const double dx = static_cast<double>(a.x) - b.x;
  const double dy = static_cast<double>(a.y) - b.y;
  const double dz = static_cast<double>(a.z) - b.z;
  return dx * dx + dy * dy + dz * dz;
}

/// Sensor-frame point cloud in meters with optional per-point reflectance.
struct PointCloud {
  std::vector<Point3f> points;
  std::optional<std::vector<float>> intensity;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// Throws PreconditionError if a coordinate is not finite or the intensity
  /// channel does not match the point count.
  void validate() const {
    for (const auto& p : points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        throw PreconditionError("point cloud contains a non-finite coordinate");
      }
    }
    if (intensity && intensity->size() != points.size()) {
      throw PreconditionError("intensity length does not match point count");
    }
  }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

/// Keeps the points whose range lies in [min_r, max_r], preserving order.
inline PointCloud filter_by_range(const PointCloud& cloud, double min_r, double max_r) {
  if (!(min_r >= 0.0) || !(min_r < max_r)) {
    throw InvalidArgument("filter_by_range requires 0 <= min_r < max_r");
  }
  PointCloud out;
  out.points.reserve(cloud.size());
  if (cloud.intensity) out.intensity.emplace().reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    const double x = p.x, y = p.y, z = p.z;
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r < min_r || r > max_r) continue;
    out.points.push_back(p);
    if (cloud.intensity) out.intensity->push_back((*cloud.intensity)[i]);
  }
  return out;
}

}  // namespace riup
