// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riup/errors.hpp"
#include "riup/range_image.hpp"

namespace riup {

enum class ResampleMethod { kBilinear, kBicubic, kLanczos3 };

inline std::string_view to_string(ResampleMethod m) {
  switch (m) {
    case ResampleMethod::kBilinear: return "bilinear";
    case ResampleMethod::kBicubic: return "bicubic";
    case ResampleMethod::kLanczos3: return "lanczos3";
  }
  return "?";
}

inline std::optional<ResampleMethod> parse_resample_method(std::string_view s) {
  if (s == "bilinear") return ResampleMethod::kBilinear;
  if (s == "bicubic") return ResampleMethod::kBicubic;
  if (s == "lanczos3" || s == "lanczos") return ResampleMethod::kLanczos3;
  return std::nullopt;
}

struct UpscaleSpec {
  int factor_x = 2;
  int factor_y = 1;
  ResampleMethod method = ResampleMethod::kBilinear;
};

/// Half-width of the kernel in source pixels.
inline int kernel_support(ResampleMethod m) {
  switch (m) {
    case ResampleMethod::kBilinear: return 1;
    case ResampleMethod::kBicubic: return 2;
    case ResampleMethod::kLanczos3: return 3;
  }
  return 1;
}

/// Continuous kernel value at offset x (source pixels).
inline double kernel_value(ResampleMethod m, double x) {
  const double ax = std::fabs(x);
  switch (m) {
    case ResampleMethod::kBilinear:
      return ax < 1.0 ? 1.0 - ax : 0.0;
    case ResampleMethod::kBicubic: {
      constexpr double a = -0.5;  // Keys
      if (ax <= 1.0) return ((a + 2.0) * ax - (a + 3.0)) * ax * ax + 1.0;
      if (ax < 2.0) return ((a * ax - 5.0 * a) * ax + 8.0 * a) * ax - 4.0 * a;
      return 0.0;
    }
    case ResampleMethod::kLanczos3: {
      if (ax == 0.0) return 1.0;
      if (ax >= 3.0) return 0.0;
      const double px = std::numbers::pi * x;
      return 3.0 * std::sin(px) * std::sin(px / 3.0) / (px * px);
    }
  }
  return 0.0;
}

/// Normalized weights for a sample at fractional position `phase` past the
/// source pixel i0 = floor(s). Tap j (0 .. 2*support-1) reads source pixel
/// i0 - support + 1 + j, so for bilinear the result is [1 - phase, phase].
inline std::vector<double> kernel_weights(ResampleMethod m, double phase) {
  const int support = kernel_support(m);
  std::vector<double> w(static_cast<std::size_t>(2 * support));
  double sum = 0.0;
  for (int j = 0; j < 2 * support; ++j) {
    w[static_cast<std::size_t>(j)] = kernel_value(m, phase + support - 1 - j);
    sum += w[static_cast<std::size_t>(j)];
  }
  for (auto& x : w) x /= sum;
  return w;
}

namespace detail {

// Precomputed taps for one output coordinate along an axis of length n.
struct AxisTaps {
  std::vector<int> first;  // leftmost unclamped source index per output
  std::vector<double> weights;  // taps per output, contiguous
  int count = 0;
};

inline AxisTaps make_axis_taps(ResampleMethod m, int src_len, int factor) {
  AxisTaps t;
  const int support = kernel_support(m);
  t.count = 2 * support;
  const int out_len = src_len * factor;
  t.first.resize(static_cast<std::size_t>(out_len));
  t.weights.reserve(static_cast<std::size_t>(out_len * t.count));
  for (int o = 0; o < out_len; ++o) {
    const double s = (o + 0.5) / factor - 0.5;
    const double i0 = std::floor(s);
    t.first[static_cast<std::size_t>(o)] = static_cast<int>(i0) - support + 1;
    const auto w = kernel_weights(m, s - i0);
    t.weights.insert(t.weights.end(), w.begin(), w.end());
  }
  return t;
}

}  // namespace detail

/// Separable resampling with edge-replicate borders. EMPTY pixels enter the
/// filter as 0.0. Outputs are clamped to [0, max_depth] and anything below
/// min_depth becomes EMPTY.
inline RangeImage upscale_baseline(const RangeImage& ri, const UpscaleSpec& spec) {
  if (spec.factor_x < 1 || spec.factor_y < 1) throw InvalidArgument("upscale factors must be >= 1");
  const int w = ri.width(), h = ri.height();
  RiGeometry g = ri.geometry();
  g.width = w * spec.factor_x;
  g.height = h * spec.factor_y;
  const auto tx = detail::make_axis_taps(spec.method, w, spec.factor_x);
  const auto ty = detail::make_axis_taps(spec.method, h, spec.factor_y);

  // Horizontal pass into a double buffer of size h x g.width.
  std::vector<double> tmp(static_cast<std::size_t>(h) * static_cast<std::size_t>(g.width));
  for (int v = 0; v < h; ++v) {
    for (int o = 0; o < g.width; ++o) {
      const double* wt = tx.weights.data() + static_cast<std::size_t>(o) * tx.count;
      const int first = tx.first[static_cast<std::size_t>(o)];
      double acc = 0.0;
      for (int j = 0; j < tx.count; ++j) acc += wt[j] * ri.at(v, std::clamp(first + j, 0, w - 1));
      tmp[static_cast<std::size_t>(v) * g.width + o] = acc;
    }
  }

  RangeImage out(g);
  for (int o = 0; o < g.height; ++o) {
    const double* wt = ty.weights.data() + static_cast<std::size_t>(o) * ty.count;
    const int first = ty.first[static_cast<std::size_t>(o)];
    for (int u = 0; u < g.width; ++u) {
      double acc = 0.0;
      for (int j = 0; j < ty.count; ++j) {
        acc += wt[j] * tmp[static_cast<std::size_t>(std::clamp(first + j, 0, h - 1)) * g.width + u];
      }
      acc = std::clamp(acc, 0.0, g.max_depth);
      if (acc < g.min_depth) continue;
      float d = static_cast<float>(acc);
      if (d < g.min_depth) d = std::nextafter(d, static_cast<float>(g.max_depth));
      if (d > g.max_depth) d = std::nextafter(d, static_cast<float>(g.min_depth));
      out.at(o, u) = d;
    }
  }
  return out;
}

}  // namespace riup
