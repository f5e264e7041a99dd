// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

// riup command line: conversion, degradation, interpolation, reconstruction,
// scoring, and the end-to-end experiment pipeline with parameter sweeps.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <optional>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "riup/riup.hpp"

namespace fs = std::filesystem;

namespace {

struct GeometryFlags {
  riup::RiGeometry geom;

  void attach(CLI::App* app) {
    app->add_option("--width", geom.width, "RI width in pixels")->capture_default_str();
    app->add_option("--height", geom.height, "RI height in pixels")->capture_default_str();
    app->add_option("--pitch-max", geom.pitch_max, "top of vertical FOV, degrees")->capture_default_str();
    app->add_option("--pitch-min", geom.pitch_min, "bottom of vertical FOV, degrees")->capture_default_str();
    app->add_option("--min-depth", geom.min_depth, "minimum depth, meters")->capture_default_str();
    app->add_option("--max-depth", geom.max_depth, "maximum depth, meters")->capture_default_str();
  }
};

// Interpolation flags shared by interp, pipeline and sweep. List-valued in
// sweep, scalar elsewhere; parsing happens after CLI11 has filled strings.
struct InterpFlags {
  std::string method = "gradient";
  std::string window = "32x4";
  std::string policy = "asc";
  std::string grad_threshold = "2.5";
  std::string max_fills = "unlimited";

  void attach(CLI::App* app, bool lists) {
    const std::string suffix = lists ? " (comma-separated list)" : "";
    app->add_option("--method", method, "none|bilinear|bicubic|lanczos3|gradient" + suffix)->capture_default_str();
    app->add_option("--window", window, "gradient window WxH" + suffix)->capture_default_str();
    app->add_option("--policy", policy, "fill order asc|desc" + suffix)->capture_default_str();
    app->add_option("--grad-threshold", grad_threshold, "max |depth gradient|, m/pixel" + suffix)
        ->capture_default_str();
    app->add_option("--max-fills", max_fills, "fills per window or 'unlimited'" + suffix)->capture_default_str();
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

riup::Method to_method(const std::string& s) {
  if (auto m = riup::parse_method(s)) return *m;
  throw riup::InvalidArgument("unknown method '" + s + "'");
}

riup::FillOrder to_order(const std::string& s) {
  if (auto o = riup::parse_fill_order(s)) return *o;
  throw riup::InvalidArgument("unknown policy '" + s + "'");
}

std::pair<int, int> to_window(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::logic_error&) {
    throw riup::InvalidArgument("window must look like WxH, got '" + s + "'");
  }
}

std::optional<int> to_max_fills(const std::string& s) {
  if (s == "unlimited" || s == "-1") return std::nullopt;
  try {
    return std::stoi(s);
  } catch (const std::logic_error&) {
    throw riup::InvalidArgument("max-fills must be an integer or 'unlimited', got '" + s + "'");
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    return std::stod(s);
  } catch (const std::logic_error&) {
    throw riup::InvalidArgument(std::string(what) + " must be a number, got '" + s + "'");
  }
}

bool is_ri_path(const std::string& p) { return fs::path(p).extension() == ".pgm"; }

riup::RangeImage load_ri(const std::string& input, const riup::RiGeometry& geom) {
  if (is_ri_path(input)) {
    if (!fs::exists(input)) throw riup::IoError("input '" + input + "' does not exist");
    return riup::read_pgm(input, geom);
  }
  const auto cloud = riup::filter_by_range(riup::load_input(input), geom.min_depth, geom.max_depth);
  return riup::cloud_to_ri(cloud, geom);
}

void save_cloud(const riup::PointCloud& cloud, const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".bin") riup::write_kitti_bin(cloud, path);
  else if (ext == ".ply") riup::write_ply(cloud, path);
  else throw riup::InvalidArgument("output '" + path + "' must end in .bin or .ply");
}

// Inserts "--key value" pairs from a key=value file directly after the
// subcommand name, skipping keys already given on the command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw riup::IoError("cannot read config file '" + config_path + "'");
  auto given = [&](const std::string& key) {
    for (const auto& a : args) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
      if (key == "input" && a == "-i") return true;
      if (key == "output" && a == "-o") return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty() || given(key)) continue;
    extra.push_back("--" + key + "=" + value);
  }
  const std::size_t at = args.size() > 1 ? 2 : 1;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-image interpolation toolkit for lossy LiDAR point clouds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for all subcommands");
  app.add_option("--config", "key=value file supplying any flag (command line wins)");

  // convert
  auto* convert = app.add_subcommand("convert", "convert clouds: bin/ply/synth:N -> bin, ply or pgm range image");
  std::string conv_in, conv_out;
  GeometryFlags conv_geom;
  convert->add_option("-i,--input", conv_in, "input cloud")->required();
  convert->add_option("-o,--output", conv_out, "output .bin, .ply or .pgm")->required();
  conv_geom.attach(convert);

  // synth
  auto* synth = app.add_subcommand("synth", "write a deterministic synthetic street scan");
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--seed", synth_seed, "scene seed")->capture_default_str();
  synth->add_option("-o,--output", synth_out, "output .bin or .ply")->required();

  // degrade
  auto* degrade = app.add_subcommand("degrade", "decimate and quantize a range image");
  std::string deg_in, deg_out;
  int deg_fx = 2, deg_fy = 1, deg_bits = 12;
  bool deg_direct = false;
  GeometryFlags deg_geom;
  degrade->add_option("-i,--input", deg_in, "cloud or .pgm range image")->required();
  degrade->add_option("-o,--output", deg_out, "output .pgm")->required();
  degrade->add_option("--factor-x", deg_fx)->capture_default_str();
  degrade->add_option("--factor-y", deg_fy)->capture_default_str();
  degrade->add_option("--bits", deg_bits, "quantizer bits in [4,16], 0 to disable")->capture_default_str();
  degrade->add_flag("--direct-projection", deg_direct, "project the cloud at reduced size instead of decimating");
  deg_geom.attach(degrade);

  // interp
  auto* interp = app.add_subcommand("interp", "upscale a range image");
  std::string int_in, int_out;
  int int_fx = 2, int_fy = 1;
  GeometryFlags int_geom;
  InterpFlags int_flags;
  interp->add_option("-i,--input", int_in, ".pgm range image (or a cloud, projected first)")->required();
  interp->add_option("-o,--output", int_out, "output .pgm")->required();
  interp->add_option("--factor-x", int_fx)->capture_default_str();
  interp->add_option("--factor-y", int_fy)->capture_default_str();
  int_geom.attach(interp);
  int_flags.attach(interp, false);

  // reconstruct
  auto* reconstruct = app.add_subcommand("reconstruct", "range image -> point cloud");
  std::string rec_in, rec_out;
  int rec_fx = 1, rec_fy = 1;
  GeometryFlags rec_geom;
  reconstruct->add_option("-i,--input", rec_in, ".pgm range image")->required();
  reconstruct->add_option("-o,--output", rec_out, "output .ply or .bin")->required();
  reconstruct->add_option("--factor-x", rec_fx, "color non-copy columns as interpolated when > 1")
      ->capture_default_str();
  reconstruct->add_option("--factor-y", rec_fy)->capture_default_str();
  rec_geom.attach(reconstruct);

  // score
  auto* score = app.add_subcommand("score", "compare a candidate RI with a reference RI");
  std::string sc_ref, sc_cand;
  int sc_fx = 2, sc_fy = 1;
  double sc_delta = 0.5;
  GeometryFlags sc_geom;
  score->add_option("--reference", sc_ref, "reference .pgm")->required();
  score->add_option("--candidate", sc_cand, "candidate .pgm")->required();
  score->add_option("--factor-x", sc_fx, "upscale factor used to tag interpolated pixels")->capture_default_str();
  score->add_option("--factor-y", sc_fy)->capture_default_str();
  score->add_option("--delta", sc_delta, "noise distance threshold, meters")->capture_default_str();
  sc_geom.attach(score);

  // pipeline and sweep share config flags
  riup::PipelineConfig base;
  GeometryFlags pipe_geom;
  InterpFlags pipe_flags;
  std::string format = "json";
  std::string report_path;
  bool no_artifacts = false;
  auto attach_pipeline = [&](CLI::App* sub, bool lists) {
    sub->add_option("-i,--input", base.inputs, "KITTI .bin, .ply or synth:<seed>; repeatable")->required();
    pipe_geom.attach(sub);
    sub->add_option("--factor-x", base.factor_x)->capture_default_str();
    sub->add_option("--factor-y", base.factor_y)->capture_default_str();
    sub->add_option("--bits", base.bits, "quantizer bits in [4,16], 0 to disable")->capture_default_str();
    sub->add_flag("--direct-projection", base.direct_projection);
    sub->add_option("--delta", base.delta, "noise distance threshold, meters")->capture_default_str();
    sub->add_option("--out-dir", base.out_dir, "artifact directory")->capture_default_str();
    sub->add_flag("--no-artifacts", no_artifacts, "skip PGM/PLY outputs");
    sub->add_option("--report", report_path, "report file (default: <out-dir>/report.<format>)");
    pipe_flags.attach(sub, lists);
  };
  auto* pipeline = app.add_subcommand("pipeline", "ingest -> project -> degrade -> interpolate -> reconstruct -> score");
  attach_pipeline(pipeline, false);
  pipeline->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  auto* sweep = app.add_subcommand("sweep", "pipeline over a parameter grid, CSV output");
  attach_pipeline(sweep, true);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*convert) {
      const auto cloud = riup::load_input(conv_in);
      if (is_ri_path(conv_out)) {
        conv_geom.geom.validate();
        const auto kept = riup::filter_by_range(cloud, conv_geom.geom.min_depth, conv_geom.geom.max_depth);
        riup::write_pgm(riup::cloud_to_ri(kept, conv_geom.geom), conv_out);
      } else {
        save_cloud(cloud, conv_out);
      }
      std::cerr << "wrote " << conv_out << "\n";
    } else if (*synth) {
      save_cloud(riup::synth_scene(synth_seed), synth_out);
      std::cerr << "wrote " << synth_out << "\n";
    } else if (*degrade) {
      deg_geom.geom.validate();
      riup::RangeImage low;
      if (deg_direct && !is_ri_path(deg_in)) {
        auto g = deg_geom.geom;
        if (deg_fx < 1 || deg_fy < 1 || g.width % deg_fx != 0 || g.height % deg_fy != 0) {
          throw riup::InvalidArgument("factors must divide the RI dimensions");
        }
        g.width /= deg_fx;
        g.height /= deg_fy;
        low = load_ri(deg_in, g);
      } else {
        low = riup::downsample_ri(load_ri(deg_in, deg_geom.geom), deg_fx, deg_fy);
      }
      if (deg_bits != 0) {
        low = riup::quantize(low, {deg_bits, low.geometry().min_depth, low.geometry().max_depth});
      }
      riup::write_pgm(low, deg_out);
      std::cerr << "wrote " << deg_out << " (occupancy " << riup::occupancy(low) << ")\n";
    } else if (*interp) {
      riup::PipelineConfig c;
      c.factor_x = int_fx;
      c.factor_y = int_fy;
      c.method = to_method(int_flags.method);
      std::tie(c.window_w, c.window_h) = to_window(int_flags.window);
      c.policy.order = to_order(int_flags.policy);
      c.policy.gradient_threshold = to_double(int_flags.grad_threshold, "grad-threshold");
      c.policy.max_fills_per_window = to_max_fills(int_flags.max_fills);
      const auto low = load_ri(int_in, int_geom.geom);
      riup::RangeImage out = low;
      switch (c.method) {
        case riup::Method::kNone: break;
        case riup::Method::kGradient:
          if (int_fx != 2 || int_fy != 1) throw riup::InvalidArgument("gradient method requires factors 2x1");
          out = riup::upscale_gradient(low, c.window_w, c.window_h, c.policy);
          break;
        default: {
          const auto rm = riup::parse_resample_method(riup::to_string(c.method));
          out = riup::upscale_baseline(low, {int_fx, int_fy, *rm});
        }
      }
      riup::write_pgm(out, int_out);
      std::cerr << "wrote " << int_out << " (" << out.width() << "x" << out.height() << ")\n";
    } else if (*reconstruct) {
      if (rec_fx < 1 || rec_fy < 1) throw riup::InvalidArgument("factors must be >= 1");
      const auto ri = load_ri(rec_in, rec_geom.geom);
      const auto tagged = riup::reconstruct_tagged(ri, rec_fx, rec_fy);
      if (fs::path(rec_out).extension() == ".ply" && (rec_fx > 1 || rec_fy > 1)) {
        std::vector<riup::Rgb8> color(tagged.cloud.size());
        for (std::size_t i = 0; i < color.size(); ++i) {
          color[i] = tagged.interpolated[i] ? riup::Rgb8{230, 40, 40} : riup::Rgb8{170, 170, 170};
        }
        riup::write_ply(tagged.cloud, rec_out, color);
      } else {
        save_cloud(tagged.cloud, rec_out);
      }
      std::cerr << "wrote " << rec_out << " (" << tagged.cloud.size() << " points)\n";
    } else if (*score) {
      if (sc_fx < 1 || sc_fy < 1) throw riup::InvalidArgument("factors must be >= 1");
      const auto ref = load_ri(sc_ref, sc_geom.geom);
      const auto cand = load_ri(sc_cand, sc_geom.geom);
      const auto ref_cloud = riup::ri_to_cloud(ref);
      const auto tagged = riup::reconstruct_tagged(cand, sc_fx, sc_fy);
      const auto interp_pts = tagged.select(true);
      const auto noise = riup::noise_ratio(interp_pts, tagged.select(false), ref_cloud, sc_delta);
      nlohmann::ordered_json j;
      j["reference"] = sc_ref;
      j["candidate"] = sc_cand;
      j["delta"] = sc_delta;
      j["ssim"] = riup::ssim(cand, ref);
      j["noise_ratio"] = noise.ratio;
      j["densify_count"] = noise.densify_count;
      j["interpolated_count"] = interp_pts.size();
      j["chamfer"] = riup::chamfer(tagged.cloud, ref_cloud);
      std::cout << j.dump(2) << "\n";
    } else if (*pipeline || *sweep) {
      base.geometry = pipe_geom.geom;
      base.write_artifacts = !no_artifacts;
      const bool is_sweep = sweep->parsed();
      if (!is_sweep) {
        base.method = to_method(pipe_flags.method);
        std::tie(base.window_w, base.window_h) = to_window(pipe_flags.window);
        base.policy.order = to_order(pipe_flags.policy);
        base.policy.gradient_threshold = to_double(pipe_flags.grad_threshold, "grad-threshold");
        base.policy.max_fills_per_window = to_max_fills(pipe_flags.max_fills);
        const auto reports = riup::run_pipeline(base);
        std::string text;
        if (format == "json") {
          auto arr = nlohmann::ordered_json::array();
          for (const auto& r : reports) arr.push_back(riup::to_json(r));
          text = arr.dump(2) + "\n";
        } else {
          text = riup::csv_header() + "\n";
          for (const auto& r : reports) text += riup::csv_row(r) + "\n";
        }
        const std::string path = !report_path.empty() ? report_path
                                 : base.write_artifacts ? (fs::path(base.out_dir) / ("report." + format)).string()
                                                        : std::string();
        if (!path.empty()) {
          if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
          std::ofstream(path) << text;
        }
        std::cout << text;
        int failed = 0;
        for (const auto& r : reports) {
          if (!r.ok()) {
            std::cerr << "error: " << r.input << ": stage " << r.error_stage << ": " << r.error << "\n";
            ++failed;
          }
        }
        return failed == 0 ? 0 : 1;
      }
      riup::SweepGrid grid;
      grid.methods.clear();
      for (const auto& s : split_list(pipe_flags.method)) grid.methods.push_back(to_method(s));
      grid.thresholds.clear();
      for (const auto& s : split_list(pipe_flags.grad_threshold)) grid.thresholds.push_back(to_double(s, "grad-threshold"));
      grid.orders.clear();
      for (const auto& s : split_list(pipe_flags.policy)) grid.orders.push_back(to_order(s));
      grid.windows.clear();
      for (const auto& s : split_list(pipe_flags.window)) grid.windows.push_back(to_window(s));
      grid.max_fills.clear();
      for (const auto& s : split_list(pipe_flags.max_fills)) grid.max_fills.push_back(to_max_fills(s));
      const std::string csv = riup::sweep(base, grid);
      if (!report_path.empty()) std::ofstream(report_path) << csv;
      std::cout << csv;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
