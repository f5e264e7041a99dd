// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "riup/pipeline.hpp"
#include "test_support.hpp"

namespace riup {
namespace {

nlohmann::ordered_json without_timing(const ScanReport& r) {
  auto j = to_json(r);
  for (auto it = j.begin(); it != j.end();) {
    if (it.key().rfind("t_", 0) == 0) it = j.erase(it);
    else ++it;
  }
  return j;
}

PipelineConfig quiet(Method m) {
  PipelineConfig c;
  c.method = m;
  c.write_artifacts = false;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

TEST(SynthScene, DeterministicPerSeed) {
  EXPECT_EQ(synth_scene(0), synth_scene(0));
  EXPECT_NE(synth_scene(0).points, synth_scene(1).points);
}

TEST(SynthScene, PointsRespectRangeAndFov) {
  const auto cloud = synth_scene(0);
  EXPECT_GE(cloud.size(), 50000u);
  EXPECT_LE(cloud.size(), 150000u);
  EXPECT_NO_THROW(cloud.validate());
  for (const auto& p : cloud.points) {
    const double r = point_range(p);
    ASSERT_GE(r, 2.0);
    ASSERT_LE(r, 120.0);
    const double pitch = std::asin(p.z / r) * 180.0 / std::numbers::pi;
    ASSERT_GE(pitch, -24.8);
    ASSERT_LE(pitch, 2.0);
  }
}

TEST(SynthScene, ProjectedOccupancy) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double occ = occupancy(cloud_to_ri(synth_scene(seed), RiGeometry{}));
    EXPECT_GT(occ, 0.3);
    // measured 0.940-0.947 for seeds 0-4
    EXPECT_GT(occ, 0.92) << seed;
    EXPECT_LT(occ, 0.97) << seed;
  }
}

TEST(RunScan, NoneMethodScoresDegradedAgainstDecimatedReference) {
  ScanProducts p;
  const auto r = run_scan("synth:0", quiet(Method::kNone), &p);
  ASSERT_TRUE(r.ok()) << r.error;
  EXPECT_EQ(r.quality.interpolated_count, 0u);
  EXPECT_EQ(r.quality.noise_ratio, 0.0);
  EXPECT_EQ(p.output.width(), 1024);
  EXPECT_DOUBLE_EQ(r.quality.ssim, ssim(p.output, downsample_ri(p.reference, 2, 1)));
  EXPECT_GT(r.quality.ssim, 0.99);  // 12-bit quantization only
}

TEST(RunScan, MatchesManualComposition) {
  PipelineConfig c = quiet(Method::kGradient);
  ScanProducts p;
  const auto r = run_scan("synth:1", c, &p);
  ASSERT_TRUE(r.ok()) << r.error;

  const auto cloud = filter_by_range(synth_scene(1), 2.0, 120.0);
  const auto reference = cloud_to_ri(cloud, c.geometry);
  const auto degraded = lossy_roundtrip(reference, 2, 1, QuantizerSpec{12, 2.0, 120.0});
  const auto output = upscale_gradient(degraded, 32, 4, c.policy);
  EXPECT_EQ(p.reference, reference);
  EXPECT_EQ(p.degraded, degraded);
  EXPECT_EQ(p.output, output);

  const auto recon = ri_to_cloud(output);
  EXPECT_EQ(p.reconstruction.cloud, recon);
  PointCloud interp, source;
  std::size_t k = 0;
  for (int v = 0; v < output.height(); ++v) {
    for (int u = 0; u < output.width(); ++u) {
      if (is_empty(output.at(v, u))) continue;
      (u % 2 ? interp : source).points.push_back(recon.points[k++]);
    }
  }
  const auto ref_cloud = ri_to_cloud(reference);
  const auto noise = noise_ratio(interp, source, ref_cloud, 0.5);
  EXPECT_EQ(r.quality.ssim, ssim(output, reference));
  EXPECT_EQ(r.quality.noise_ratio, noise.ratio);
  EXPECT_EQ(r.quality.densify_count, noise.densify_count);
  EXPECT_EQ(r.quality.interpolated_count, interp.size());
  EXPECT_EQ(r.quality.chamfer, chamfer(recon, ref_cloud));
  EXPECT_EQ(r.points_input, cloud.size());
}

TEST(RunScan, BaselineAndGradientReportsAreComparable) {
  const auto a = to_json(run_scan("synth:2", quiet(Method::kBilinear)));
  const auto b = to_json(run_scan("synth:2", quiet(Method::kGradient)));
  ASSERT_EQ(a.size(), b.size());
  for (auto it = a.begin(); it != a.end(); ++it) {
    ASSERT_TRUE(b.contains(it.key())) << it.key();
    EXPECT_EQ(it.value().type(), b[it.key()].type()) << it.key();
  }
  EXPECT_GT(a["noise_ratio"].get<double>(), b["noise_ratio"].get<double>());
  EXPECT_GT(a["ssim"].get<double>(), b["ssim"].get<double>());
}

TEST(RunScan, MissingInputReportsLoadStage) {
  const auto r = run_scan("/nonexistent/riup/000000.bin", quiet(Method::kGradient));
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.error_stage, "load");
  EXPECT_NE(r.error.find("/nonexistent/riup/000000.bin"), std::string::npos);
}

TEST(RunScan, InvalidConfigReportsConfigStage) {
  PipelineConfig c = quiet(Method::kGradient);
  c.factor_x = 4;
  const auto r = run_scan("synth:0", c);
  EXPECT_EQ(r.error_stage, "config");
  c = quiet(Method::kBilinear);
  c.bits = 20;
  EXPECT_EQ(run_scan("synth:0", c).error_stage, "config");
}

TEST(RunScan, DirectProjectionPath) {
  PipelineConfig c = quiet(Method::kGradient);
  c.direct_projection = true;
  ScanProducts p;
  const auto r = run_scan("synth:0", c, &p);
  ASSERT_TRUE(r.ok()) << r.error;
  EXPECT_EQ(p.degraded.width(), 1024);
  EXPECT_GT(r.occupancy_degraded, r.occupancy_reference);  // 2000 azimuth steps into 1024 bins
}

TEST(RunPipeline, OtherScansProceedAfterFailureAndRowsAreSorted) {
  PipelineConfig c = quiet(Method::kBilinear);
  c.inputs = {"synth:1", "/nonexistent/x.bin", "synth:0"};
  const auto reports = run_pipeline(c);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].input, "/nonexistent/x.bin");
  EXPECT_FALSE(reports[0].ok());
  EXPECT_EQ(reports[1].input, "synth:0");
  EXPECT_TRUE(reports[1].ok());
  EXPECT_TRUE(reports[2].ok());
}

TEST(RunPipeline, DeterministicApartFromTiming) {
  PipelineConfig c = quiet(Method::kGradient);
  c.inputs = {"synth:3"};
  const auto a = run_pipeline(c), b = run_pipeline(c);
  EXPECT_EQ(without_timing(a[0]).dump(), without_timing(b[0]).dump());
}

TEST(RunPipeline, ReportEchoesFullConfig) {
  const auto j = to_json(run_scan("synth:0", quiet(Method::kGradient)));
  for (const char* key : {"input", "method", "width", "height", "pitch_max", "pitch_min", "min_depth", "max_depth",
                          "factor_x", "factor_y", "bits", "direct_projection", "window_w", "window_h", "policy",
                          "max_fills", "grad_threshold", "delta", "ssim", "noise_ratio", "densify_count", "chamfer",
                          "t_load_ms", "t_project_ms", "t_degrade_ms", "t_interpolate_ms", "t_reconstruct_ms",
                          "t_score_ms", "t_total_ms", "error_stage", "error"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["max_fills"], -1);
  EXPECT_EQ(j["policy"], "asc");
}

TEST(RunPipeline, WritesArtifacts) {
  testing::TempDir dir("artifacts");
  PipelineConfig c;
  c.method = Method::kGradient;
  c.out_dir = dir.path().string();
  const auto r = run_scan("synth:0", c);
  ASSERT_TRUE(r.ok()) << r.error;
  for (const char* f : {"reference.pgm", "degraded.pgm", "gradient.pgm", "reference.ply", "gradient.ply"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "synth_0" / f)) << f;
  }
  const auto back = read_pgm(dir.path() / "synth_0" / "gradient.pgm");
  EXPECT_EQ(back.width(), 2048);
  EXPECT_EQ(read_ply(dir.path() / "synth_0" / "gradient.ply").size(), r.points_output);
}

TEST(Sweep, SingleCellMatchesRunPipeline) {
  PipelineConfig c = quiet(Method::kGradient);
  c.inputs = {"synth:4"};
  std::vector<ScanReport> swept;
  const auto csv = sweep(c, SweepGrid{}, &swept);
  ASSERT_EQ(lines(csv).size(), 2u);
  EXPECT_EQ(lines(csv)[0], csv_header());
  ASSERT_EQ(swept.size(), 1u);
  EXPECT_EQ(without_timing(swept[0]).dump(), without_timing(run_pipeline(c)[0]).dump());
}

TEST(Sweep, GridCardinalityAndThresholdMonotonicity) {
  PipelineConfig c = quiet(Method::kGradient);
  c.inputs = {"synth:0", "synth:1"};
  SweepGrid grid;
  grid.thresholds = {2.5, 1.0};
  grid.orders = {FillOrder::kAscendingDepth, FillOrder::kDescendingDepth};
  std::vector<ScanReport> swept;
  const auto csv = sweep(c, grid, &swept);
  EXPECT_EQ(lines(csv).size(), 1u + 8u);
  ASSERT_EQ(swept.size(), 8u);

  grid = {};
  grid.thresholds = {8.0, 4.0, 2.5, 1.5, 1.0, 0.5};
  swept.clear();
  c.inputs = {"synth:2"};
  sweep(c, grid, &swept);
  for (std::size_t i = 1; i < swept.size(); ++i) {
    EXPECT_LE(swept[i].quality.noise_ratio, swept[i - 1].quality.noise_ratio)
        << swept[i].config.policy.gradient_threshold;
  }
}

TEST(Sweep, FailingCellsBecomeErrorRows) {
  PipelineConfig c = quiet(Method::kGradient);
  c.inputs = {"synth:0"};
  SweepGrid grid;
  grid.windows = {{48, 4}, {32, 4}};  // 48 does not tile 1024
  std::vector<ScanReport> swept;
  const auto csv = sweep(c, grid, &swept);
  ASSERT_EQ(swept.size(), 2u);
  EXPECT_EQ(swept[0].error_stage, "config");
  EXPECT_TRUE(swept[1].ok());
  EXPECT_EQ(lines(csv).size(), 3u);
}

TEST(Sweep, BaselinesDoNotMultiplyOverPolicyDimensions) {
  PipelineConfig base = quiet(Method::kGradient);
  SweepGrid grid;
  grid.methods = {Method::kBilinear, Method::kGradient};
  grid.thresholds = {1.0, 2.0};
  grid.orders = {FillOrder::kAscendingDepth, FillOrder::kDescendingDepth};
  EXPECT_EQ(expand_grid(base, grid).size(), 1u + 4u);
}

TEST(Csv, QuotesFieldsWithCommas) {
  ScanReport r;
  r.input = "a,b";
  r.error = "say \"hi\"";
  const auto row = csv_row(r);
  EXPECT_EQ(row.rfind("\"a,b\",", 0), 0u);
  EXPECT_NE(row.find("\"say \"\"hi\"\"\""), std::string::npos);
}

}  // namespace
}  // namespace riup
