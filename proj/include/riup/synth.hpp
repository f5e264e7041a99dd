// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "riup/point_cloud.hpp"

namespace riup {

/// Knobs of the synthetic street scene. Defaults mimic a 64-beam spinning
/// sensor mounted 1.73 m above a flat road.
struct SynthSceneSpec {
  int beams = 64;
  int azimuth_steps = 2000;
  double pitch_max = 2.0;
  double pitch_min = -24.8;
  double sensor_height = 1.73;
  double min_range = 2.0;
  double max_range = 120.0;
  double range_noise = 0.01;  // meters, 1 sigma
  double dropout = 0.02;      // probability a ray returns nothing
};

namespace detail {

// Portable uniform/normal draws; std distributions are implementation-defined.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct Box {
  double lo[3], hi[3];
  float reflectance;
};

struct Cylinder {
  double cx, cy, radius, z0, z1;
  float reflectance;
};

inline double hit_box(const double d[3], const Box& b) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::fabs(d[a]) < 1e-12) {
      if (0.0 < b.lo[a] || 0.0 > b.hi[a]) return -1.0;
      continue;
    }
    double ta = b.lo[a] / d[a], tb = b.hi[a] / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return -1.0;
  }
  return t0 > 0.0 ? t0 : -1.0;
}

inline double hit_cylinder(const double d[3], const Cylinder& c) {
  const double a = d[0] * d[0] + d[1] * d[1];
  if (a < 1e-12) return -1.0;
  const double b = -2.0 * (d[0] * c.cx + d[1] * c.cy);
  const double cc = c.cx * c.cx + c.cy * c.cy - c.radius * c.radius;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return -1.0;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  if (t <= 0.0) return -1.0;
  const double z = t * d[2];
  return (z >= c.z0 && z <= c.z1) ? t : -1.0;
}

}  // namespace detail

/// Deterministic street scene (road, building rows, parked cars, poles)
/// sampled by ray casting at spinning-LiDAR beam geometry.
inline PointCloud synth_scene(std::uint64_t seed, const SynthSceneSpec& spec = {}) {
  detail::SceneRng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  const double ground = -spec.sensor_height;
  std::vector<detail::Box> boxes;
  std::vector<detail::Cylinder> poles;

  // Building rows on both sides of the street, broken by alleys.
  for (int side : {-1, 1}) {
    double x = -100.0;
    const double setback = rng.uniform(9.0, 16.0);
    while (x < 100.0) {
      const double len = rng.uniform(8.0, 35.0);
      const double depth = rng.uniform(6.0, 15.0);
      const double y_near = side * (setback + rng.uniform(0.0, 3.0));
      const double y_far = y_near + side * depth;
      boxes.push_back({{x, std::min(y_near, y_far), ground}, {x + len, std::max(y_near, y_far), ground + rng.uniform(5.0, 18.0)},
                       static_cast<float>(rng.uniform(0.2, 0.5))});
      x += len + rng.uniform(2.0, 10.0);
    }
  }
  // Cars along both lanes and parked at the curb.
  const int cars = 6 + static_cast<int>(rng.uniform() * 8);
  for (int i = 0; i < cars; ++i) {
    double cx, cy;
    do {
      cx = rng.uniform(-50.0, 50.0);
      cy = rng.uniform(-7.0, 7.0);
    } while (std::fabs(cx) < 5.0 && std::fabs(cy) < 3.0);
    const bool along = rng.uniform() < 0.85;
    const double hl = along ? 2.2 : 0.9, hw = along ? 0.9 : 2.2;
    boxes.push_back({{cx - hl, cy - hw, ground}, {cx + hl, cy + hw, ground + rng.uniform(1.4, 1.9)},
                     static_cast<float>(rng.uniform(0.1, 0.9))});
  }
  const int pole_count = 8 + static_cast<int>(rng.uniform() * 10);
  for (int i = 0; i < pole_count; ++i) {
    const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
    poles.push_back({rng.uniform(-60.0, 60.0), side * rng.uniform(7.5, 9.0), rng.uniform(0.12, 0.45), ground,
                     ground + rng.uniform(3.0, 9.0), static_cast<float>(rng.uniform(0.3, 0.7))});
  }

  PointCloud cloud;
  auto& intensity = cloud.intensity.emplace();
  const double beam_span = (spec.pitch_max - spec.pitch_min) / spec.beams;
  for (int beam = 0; beam < spec.beams; ++beam) {
    const double pitch_deg = spec.pitch_max - (beam + 0.5) * beam_span + rng.uniform(-0.15, 0.15) * beam_span;
    const double pitch = pitch_deg * std::numbers::pi / 180.0;
    const double start = rng.uniform(0.0, 2.0 * std::numbers::pi / spec.azimuth_steps);
    for (int step = 0; step < spec.azimuth_steps; ++step) {
      const double yaw = start + 2.0 * std::numbers::pi * step / spec.azimuth_steps - std::numbers::pi;
      const double dir[3] = {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
      double best = std::numeric_limits<double>::infinity();
      float refl = 0.0f;
      if (dir[2] < 0.0) {
        best = ground / dir[2];
        refl = 0.15f;
      }
      for (const auto& b : boxes) {
        const double t = detail::hit_box(dir, b);
        if (t > 0.0 && t < best) best = t, refl = b.reflectance;
      }
      for (const auto& c : poles) {
        const double t = detail::hit_cylinder(dir, c);
        if (t > 0.0 && t < best) best = t, refl = c.reflectance;
      }
      const double noise = spec.range_noise * rng.normal();
      const bool dropped = rng.uniform() < spec.dropout;
      if (!std::isfinite(best) || dropped) continue;
      const double r = best + noise;
      // Margin keeps the float-rounded range inside the bounds.
      if (r < spec.min_range + 1e-3 || r > spec.max_range - 1e-3) continue;
      cloud.points.push_back({static_cast<float>(r * dir[0]), static_cast<float>(r * dir[1]),
                              static_cast<float>(r * dir[2])});
      intensity.push_back(static_cast<float>(std::clamp(refl + 0.05 * rng.normal(), 0.0, 1.0)));
    }
  }
  return cloud;
}

}  // namespace riup
