// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riup/errors.hpp"
#include "riup/range_image.hpp"

namespace riup {

enum class FillOrder { kAscendingDepth, kDescendingDepth };

inline std::string_view to_string(FillOrder o) {
  return o == FillOrder::kAscendingDepth ? "asc" : "desc";
}

inline std::optional<FillOrder> parse_fill_order(std::string_view s) {
  if (s == "asc" || s == "ascending" || s == "ascending_depth") return FillOrder::kAscendingDepth;
  if (s == "desc" || s == "descending" || s == "descending_depth") return FillOrder::kDescendingDepth;
  return std::nullopt;
}

/// Which candidate sites get filled, and in what order.
struct InterpPolicy {
  FillOrder order = FillOrder::kAscendingDepth;
  /// Budget of fills per window; nullopt means unlimited.
  std::optional<int> max_fills_per_window;
  /// Largest admissible |depth difference| between horizontal neighbors, meters per pixel.
  double gradient_threshold = 2.5;

  void validate() const {
    if (!(gradient_threshold > 0.0)) throw InvalidArgument("gradient_threshold must be > 0");
    if (max_fills_per_window && *max_fills_per_window < 0) throw InvalidArgument("max_fills_per_window must be >= 0");
  }
};

/// Gap between source columns `col` and `col + 1` of row `row`.
struct CandidateSite {
  int window_id = 0;
  int row = 0;
  int col = 0;
  float fill_value = kEmpty;
  float neighbor_depth = kEmpty;
  bool valid = false;
};

struct InterpolationPlan {
  int window_w = 0;
  int window_h = 0;
  int width = 0;   // source RI dimensions the plan was explored on
  int height = 0;
  InterpPolicy policy;
  /// Every horizontally adjacent in-window pair, sorted by neighbor_depth in
  /// policy order with ties broken by (row, col) ascending.
  std::vector<CandidateSite> sites;
};

/// True when `a` precedes `b` under the policy ordering.
inline bool site_precedes(const CandidateSite& a, const CandidateSite& b, FillOrder order) {
  if (a.neighbor_depth != b.neighbor_depth) {
    return order == FillOrder::kAscendingDepth ? a.neighbor_depth < b.neighbor_depth
                                               : a.neighbor_depth > b.neighbor_depth;
  }
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

/// Window exploration: computes the depth gradient of every horizontal pixel
/// pair inside each window, its midpoint fill value, and whether the gap may
/// be filled. Pairs touching an EMPTY pixel or whose gradient exceeds the
/// threshold are kept but marked invalid.
inline InterpolationPlan explore_windows(const RangeImage& ri, int window_w, int window_h,
                                         const InterpPolicy& policy) {
  policy.validate();
  if (window_w < 2 || window_h < 1) throw InvalidArgument("window must be at least 2 pixels wide and 1 tall");
  if (ri.width() % window_w != 0 || ri.height() % window_h != 0) {
    throw InvalidArgument("window " + std::to_string(window_w) + "x" + std::to_string(window_h) +
                          " does not tile a " + std::to_string(ri.width()) + "x" + std::to_string(ri.height()) +
                          " range image");
  }
  InterpolationPlan plan;
  plan.window_w = window_w;
  plan.window_h = window_h;
  plan.width = ri.width();
  plan.height = ri.height();
  plan.policy = policy;
  const int windows_per_row = ri.width() / window_w;
  plan.sites.reserve(static_cast<std::size_t>(ri.height()) * static_cast<std::size_t>(ri.width() - windows_per_row));

  for (int v = 0; v < ri.height(); ++v) {
    for (int u = 0; u + 1 < ri.width(); ++u) {
      if ((u + 1) % window_w == 0) continue;  // right neighbor lies in the next window
      const float left = ri.at(v, u);
      const float right = ri.at(v, u + 1);
      CandidateSite site;
      site.window_id = (v / window_h) * windows_per_row + u / window_w;
      site.row = v;
      site.col = u;
      site.neighbor_depth = std::min(left, right);
      const double gradient = static_cast<double>(right) - static_cast<double>(left);
      site.fill_value = static_cast<float>(left + gradient / 2.0);
      site.valid = !is_empty(left) && !is_empty(right) && std::fabs(gradient) <= policy.gradient_threshold;
      plan.sites.push_back(site);
    }
  }
  std::sort(plan.sites.begin(), plan.sites.end(),
            [order = policy.order](const CandidateSite& a, const CandidateSite& b) { return site_precedes(a, b, order); });
  return plan;
}

/// Window interpolation at 2x horizontal: source column u lands on output
/// column 2u, and output column 2u + 1 takes the fill value of site (row, u)
/// when that site is valid and within its window's fill budget.
inline RangeImage interpolate(const RangeImage& ri, const InterpolationPlan& plan, int factor_x = 2) {
  if (factor_x != 2) throw InvalidArgument("gradient interpolation only supports 2x horizontal upscaling");
  if (plan.width != ri.width() || plan.height != ri.height() || plan.window_w < 2 || plan.window_h < 1 ||
      ri.width() % plan.window_w != 0 || ri.height() % plan.window_h != 0) {
    throw InvalidArgument("interpolation plan does not match the range image");
  }
  RiGeometry g = ri.geometry();
  g.width *= 2;
  RangeImage out(g);
  for (int v = 0; v < ri.height(); ++v) {
    for (int u = 0; u < ri.width(); ++u) out.at(v, 2 * u) = ri.at(v, u);
  }
  const int windows = (ri.width() / plan.window_w) * (ri.height() / plan.window_h);
  std::vector<int> used(static_cast<std::size_t>(windows), 0);
  const auto budget = plan.policy.max_fills_per_window;
  for (const auto& site : plan.sites) {
    if (!site.valid) continue;
    if (site.row < 0 || site.row >= ri.height() || site.col < 0 || site.col + 1 >= ri.width() ||
        site.window_id < 0 || site.window_id >= windows) {
      throw InvalidArgument("interpolation plan site outside the range image");
    }
    int& count = used[static_cast<std::size_t>(site.window_id)];
    if (budget && count >= *budget) continue;
    ++count;
    out.at(site.row, 2 * site.col + 1) = site.fill_value;
  }
  return out;
}

/// Exploration followed by interpolation.
inline RangeImage upscale_gradient(const RangeImage& ri, int window_w, int window_h, const InterpPolicy& policy) {
  return interpolate(ri, explore_windows(ri, window_w, window_h, policy));
}

}  // namespace riup
