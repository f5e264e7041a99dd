// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riup/baselines.hpp"
#include "riup/errors.hpp"
#include "riup/gradient_interp.hpp"
#include "riup/lossy_codec.hpp"
#include "riup/metrics.hpp"
#include "riup/pc_io.hpp"
#include "riup/pgm_io.hpp"
#include "riup/range_image.hpp"
#include "riup/synth.hpp"

namespace riup {

enum class Method { kNone, kBilinear, kBicubic, kLanczos3, kGradient };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kNone: return "none";
    case Method::kBilinear: return "bilinear";
    case Method::kBicubic: return "bicubic";
    case Method::kLanczos3: return "lanczos3";
    case Method::kGradient: return "gradient";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "none") return Method::kNone;
  if (s == "gradient" || s == "ours") return Method::kGradient;
  if (auto r = parse_resample_method(s)) {
    switch (*r) {
      case ResampleMethod::kBilinear: return Method::kBilinear;
      case ResampleMethod::kBicubic: return Method::kBicubic;
      case ResampleMethod::kLanczos3: return Method::kLanczos3;
    }
  }
  return std::nullopt;
}

struct PipelineConfig {
  std::vector<std::string> inputs;
  RiGeometry geometry;
  int factor_x = 2;
  int factor_y = 1;
  int bits = 12;  // 0 disables quantization
  /// Produce the low-resolution RI by projecting at the reduced size instead
  /// of decimating the reference RI.
  bool direct_projection = false;
  Method method = Method::kGradient;
  int window_w = 32;
  int window_h = 4;
  InterpPolicy policy;
  double delta = 0.5;
  std::string out_dir = "riup_out";
  bool write_artifacts = true;

  void validate() const {
    geometry.validate();
    if (factor_x < 1 || factor_y < 1) throw InvalidArgument("factors must be >= 1");
    if (geometry.width % factor_x != 0 || geometry.height % factor_y != 0) {
      throw InvalidArgument("factors must divide the RI dimensions");
    }
    if (bits != 0) QuantizerSpec{bits, geometry.min_depth, geometry.max_depth}.validate();
    policy.validate();
    if (window_w < 2 || window_h < 1) throw InvalidArgument("window must be at least 2x1");
    if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
    if (method == Method::kGradient) {
      if (factor_x != 2 || factor_y != 1) throw InvalidArgument("gradient method requires factors 2x1");
      const int low_w = geometry.width / factor_x;
      if (low_w % window_w != 0 || geometry.height % window_h != 0) {
        throw InvalidArgument("window does not tile the degraded RI");
      }
    }
  }
};

/// Per-stage wall-clock milliseconds.
struct StageTimings {
  double load = 0, project = 0, degrade = 0, interpolate = 0, reconstruct = 0, score = 0, artifacts = 0;
  double total() const { return load + project + degrade + interpolate + reconstruct + score + artifacts; }
};

struct ScanReport {
  std::string input;
  PipelineConfig config;
  QualityReport quality;
  double occupancy_reference = 0, occupancy_degraded = 0, occupancy_output = 0;
  std::size_t points_input = 0, points_output = 0;
  StageTimings timings;
  std::string error_stage;  // empty on success
  std::string error;

  bool ok() const { return error_stage.empty(); }
};

/// Cloud plus a parallel flag per point: true when the point comes from a
/// pixel that is not a copy position (u % fx, v % fy) of a source pixel.
struct TaggedCloud {
  PointCloud cloud;
  std::vector<bool> interpolated;

  PointCloud select(bool want_interpolated) const {
    PointCloud out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (interpolated[i] == want_interpolated) out.points.push_back(cloud.points[i]);
    }
    return out;
  }
};

inline TaggedCloud reconstruct_tagged(const RangeImage& ri, int factor_x, int factor_y) {
  TaggedCloud out;
  for (int v = 0; v < ri.height(); ++v) {
    for (int u = 0; u < ri.width(); ++u) {
      const float d = ri.at(v, u);
      if (is_empty(d)) continue;
      out.cloud.points.push_back(pixel_to_point(v, u, d, ri.geometry()));
      out.interpolated.push_back(u % factor_x != 0 || v % factor_y != 0);
    }
  }
  return out;
}

/// Loads "synth:<seed>", a KITTI .bin, or a .ply file.
inline PointCloud load_input(const std::string& input) {
  if (input.rfind("synth:", 0) == 0) {
    try {
      return synth_scene(std::stoull(input.substr(6)));
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad synthetic seed in '" + input + "'");
    }
  }
  if (!std::filesystem::exists(input)) throw IoError("input '" + input + "' does not exist");
  const auto ext = std::filesystem::path(input).extension().string();
  if (ext == ".ply") return read_ply(input);
  return read_kitti_bin(input);
}

inline std::string scan_stem(const std::string& input) {
  if (input.rfind("synth:", 0) == 0) return "synth_" + input.substr(6);
  return std::filesystem::path(input).stem().string();
}

/// Intermediate products of one scan, exposed for tests and artifacts.
struct ScanProducts {
  RangeImage reference;
  RangeImage degraded;
  RangeImage output;
  PointCloud reference_cloud;
  TaggedCloud reconstruction;
};

namespace detail {

class StageClock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline RangeImage degrade_stage(const PointCloud& cloud, const RangeImage& reference, const PipelineConfig& c) {
  RangeImage low = reference;
  if (c.direct_projection) {
    RiGeometry g = c.geometry;
    g.width /= c.factor_x;
    g.height /= c.factor_y;
    low = cloud_to_ri(cloud, g);
  } else {
    low = downsample_ri(reference, c.factor_x, c.factor_y);
  }
  if (c.bits != 0) low = quantize(low, QuantizerSpec{c.bits, c.geometry.min_depth, c.geometry.max_depth});
  return low;
}

inline RangeImage upscale_stage(const RangeImage& low, const PipelineConfig& c) {
  switch (c.method) {
    case Method::kNone: return low;
    case Method::kGradient: return upscale_gradient(low, c.window_w, c.window_h, c.policy);
    case Method::kBilinear: return upscale_baseline(low, {c.factor_x, c.factor_y, ResampleMethod::kBilinear});
    case Method::kBicubic: return upscale_baseline(low, {c.factor_x, c.factor_y, ResampleMethod::kBicubic});
    case Method::kLanczos3: return upscale_baseline(low, {c.factor_x, c.factor_y, ResampleMethod::kLanczos3});
  }
  return low;
}

}  // namespace detail

/// Runs ingest, projection, degradation, upscaling, reconstruction and
/// scoring for one input. Stage failures are reported, not thrown.
inline ScanReport run_scan(const std::string& input, const PipelineConfig& config, ScanProducts* products = nullptr) {
  ScanReport rep;
  rep.input = input;
  rep.config = config;
  std::string stage = "config";
  try {
    config.validate();
    detail::StageClock clock;

    stage = "load";
    const PointCloud cloud = filter_by_range(load_input(input), config.geometry.min_depth, config.geometry.max_depth);
    rep.points_input = cloud.size();
    rep.timings.load = clock.lap();

    stage = "project";
    RangeImage reference = cloud_to_ri(cloud, config.geometry);
    rep.occupancy_reference = occupancy(reference);
    rep.timings.project = clock.lap();

    stage = "degrade";
    RangeImage degraded = detail::degrade_stage(cloud, reference, config);
    rep.occupancy_degraded = occupancy(degraded);
    rep.timings.degrade = clock.lap();

    stage = "interpolate";
    RangeImage output = detail::upscale_stage(degraded, config);
    rep.occupancy_output = occupancy(output);
    rep.timings.interpolate = clock.lap();

    stage = "reconstruct";
    const bool upscaled = config.method != Method::kNone;
    TaggedCloud recon = upscaled ? reconstruct_tagged(output, config.factor_x, config.factor_y)
                                 : reconstruct_tagged(output, 1, 1);
    PointCloud reference_cloud = ri_to_cloud(reference);
    rep.points_output = recon.cloud.size();
    rep.timings.reconstruct = clock.lap();

    stage = "score";
    const RangeImage& target = upscaled ? reference : downsample_ri(reference, config.factor_x, config.factor_y);
    rep.quality.ssim = ssim(output, target);
    const PointCloud interp = recon.select(true);
    const auto noise = noise_ratio(interp, recon.select(false), reference_cloud, config.delta);
    rep.quality.noise_ratio = noise.ratio;
    rep.quality.densify_count = noise.densify_count;
    rep.quality.interpolated_count = interp.size();
    rep.quality.chamfer = chamfer(recon.cloud, reference_cloud);
    rep.timings.score = clock.lap();

    if (config.write_artifacts) {
      stage = "artifacts";
      const auto dir = std::filesystem::path(config.out_dir) / scan_stem(input);
      std::filesystem::create_directories(dir);
      const std::string method(to_string(config.method));
      write_pgm(reference, dir / "reference.pgm");
      write_pgm(degraded, dir / "degraded.pgm");
      write_pgm(output, dir / (method + ".pgm"));
      write_ply(reference_cloud, dir / "reference.ply");
      std::vector<Rgb8> color(recon.cloud.size());
      for (std::size_t i = 0; i < color.size(); ++i) {
        color[i] = recon.interpolated[i] ? Rgb8{230, 40, 40} : Rgb8{170, 170, 170};
      }
      write_ply(recon.cloud, dir / (method + ".ply"), color);
      rep.timings.artifacts = clock.lap();
    }

    if (products) {
      *products = {std::move(reference), std::move(degraded), std::move(output), std::move(reference_cloud),
                   std::move(recon)};
    }
  } catch (const std::exception& e) {
    rep.error_stage = stage;
    rep.error = e.what();
  }
  return rep;
}

/// One report per input, ordered by input path.
inline std::vector<ScanReport> run_pipeline(const PipelineConfig& config) {
  auto inputs = config.inputs;
  std::sort(inputs.begin(), inputs.end());
  std::vector<ScanReport> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(run_scan(in, config));
  return out;
}

/// Flat JSON object: config echo, quality, occupancy, timings (t_*_ms) and
/// error fields. Key order is stable and shared with the CSV columns.
inline nlohmann::ordered_json to_json(const ScanReport& r) {
  const auto& c = r.config;
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["method"] = std::string(to_string(c.method));
  j["width"] = c.geometry.width;
  j["height"] = c.geometry.height;
  j["pitch_max"] = c.geometry.pitch_max;
  j["pitch_min"] = c.geometry.pitch_min;
  j["min_depth"] = c.geometry.min_depth;
  j["max_depth"] = c.geometry.max_depth;
  j["factor_x"] = c.factor_x;
  j["factor_y"] = c.factor_y;
  j["bits"] = c.bits;
  j["direct_projection"] = c.direct_projection;
  j["window_w"] = c.window_w;
  j["window_h"] = c.window_h;
  j["policy"] = std::string(to_string(c.policy.order));
  j["max_fills"] = c.policy.max_fills_per_window.value_or(-1);
  j["grad_threshold"] = c.policy.gradient_threshold;
  j["delta"] = c.delta;
  j["ssim"] = r.quality.ssim;
  j["noise_ratio"] = r.quality.noise_ratio;
  j["densify_count"] = r.quality.densify_count;
  j["interpolated_count"] = r.quality.interpolated_count;
  j["chamfer"] = r.quality.chamfer;
  j["occupancy_reference"] = r.occupancy_reference;
  j["occupancy_degraded"] = r.occupancy_degraded;
  j["occupancy_output"] = r.occupancy_output;
  j["points_input"] = r.points_input;
  j["points_output"] = r.points_output;
  j["t_load_ms"] = r.timings.load;
  j["t_project_ms"] = r.timings.project;
  j["t_degrade_ms"] = r.timings.degrade;
  j["t_interpolate_ms"] = r.timings.interpolate;
  j["t_reconstruct_ms"] = r.timings.reconstruct;
  j["t_score_ms"] = r.timings.score;
  j["t_artifacts_ms"] = r.timings.artifacts;
  j["t_total_ms"] = r.timings.total();
  j["error_stage"] = r.error_stage;
  j["error"] = r.error;
  return j;
}

namespace detail {

inline std::string csv_field(const nlohmann::ordered_json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

}  // namespace detail

inline std::string csv_header(const ScanReport& sample = {}) {
  std::string line;
  const auto j = to_json(sample);
  for (const auto& [key, _] : j.items()) line += (line.empty() ? "" : ",") + key;
  return line;
}

inline std::string csv_row(const ScanReport& r) {
  std::string line;
  bool first = true;
  const auto j = to_json(r);
  for (const auto& [_, value] : j.items()) {
    line += (first ? "" : ",") + detail::csv_field(value);
    first = false;
  }
  return line;
}

/// Parameter grid for sensitivity sweeps. Policy dimensions only multiply
/// rows for the gradient method.
struct SweepGrid {
  std::vector<Method> methods{Method::kGradient};
  std::vector<double> thresholds{2.5};
  std::vector<FillOrder> orders{FillOrder::kAscendingDepth};
  std::vector<std::pair<int, int>> windows{{32, 4}};
  std::vector<std::optional<int>> max_fills{std::nullopt};
};

inline std::vector<PipelineConfig> expand_grid(const PipelineConfig& base, const SweepGrid& grid) {
  std::vector<PipelineConfig> out;
  for (Method m : grid.methods) {
    const bool gradient = m == Method::kGradient;
    const std::size_t nt = gradient ? grid.thresholds.size() : std::min<std::size_t>(1, grid.thresholds.size());
    const std::size_t no = gradient ? grid.orders.size() : std::min<std::size_t>(1, grid.orders.size());
    const std::size_t nw = gradient ? grid.windows.size() : std::min<std::size_t>(1, grid.windows.size());
    const std::size_t nf = gradient ? grid.max_fills.size() : std::min<std::size_t>(1, grid.max_fills.size());
    for (std::size_t it = 0; it < nt; ++it) {
      for (std::size_t io = 0; io < no; ++io) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
          for (std::size_t jf = 0; jf < nf; ++jf) {
            PipelineConfig c = base;
            c.method = m;
            c.policy.gradient_threshold = grid.thresholds[it];
            c.policy.order = grid.orders[io];
            c.window_w = grid.windows[iw].first;
            c.window_h = grid.windows[iw].second;
            c.policy.max_fills_per_window = grid.max_fills[jf];
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

/// Runs every (input x grid cell) and returns the CSV text, one row per
/// cell. Failed cells carry their error columns and the sweep continues.
inline std::string sweep(const PipelineConfig& base, const SweepGrid& grid, std::vector<ScanReport>* reports = nullptr) {
  auto inputs = base.inputs;
  std::sort(inputs.begin(), inputs.end());
  const auto cells = expand_grid(base, grid);
  std::string csv = csv_header() + "\n";
  for (const auto& in : inputs) {
    for (const auto& c : cells) {
      const ScanReport r = run_scan(in, c);
      csv += csv_row(r) + "\n";
      if (reports) reports->push_back(r);
    }
  }
  return csv;
}

}  // namespace riup
