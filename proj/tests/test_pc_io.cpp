// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "riup/pc_io.hpp"
#include "riup/point_cloud.hpp"
#include "riup/synth.hpp"
#include "test_support.hpp"

namespace riup {
namespace {

using testing::TempDir;

void put_f32(std::vector<char>& out, float v) {
  char b[4];
  std::memcpy(b, &v, 4);  // test host is little endian
  out.insert(out.end(), b, b + 4);
}

void write_bytes(const std::filesystem::path& p, const std::vector<char>& bytes) {
  std::ofstream(p, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TEST(ReadKittiBin, DecodesHandBuiltRecords) {
  TempDir dir("kitti");
  std::vector<char> bytes;
  for (float v : {1.0f, 2.0f, 3.0f, 0.5f, 4.0f, 5.0f, 6.0f, 0.25f}) put_f32(bytes, v);
  write_bytes(dir / "two.bin", bytes);

  const auto cloud = read_kitti_bin(dir / "two.bin");
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud.points[0], (Point3f{1, 2, 3}));
  EXPECT_EQ(cloud.points[1], (Point3f{4, 5, 6}));
  ASSERT_TRUE(cloud.intensity.has_value());
  EXPECT_EQ(*cloud.intensity, (std::vector<float>{0.5f, 0.25f}));
}

TEST(ReadKittiBin, EmptyFileGivesEmptyCloud) {
  TempDir dir("kitti");
  write_bytes(dir / "empty.bin", {});
  EXPECT_TRUE(read_kitti_bin(dir / "empty.bin").empty());
}

TEST(ReadKittiBin, RejectsTruncatedRecord) {
  TempDir dir("kitti");
  write_bytes(dir / "bad.bin", std::vector<char>(20, 0));
  EXPECT_THROW(read_kitti_bin(dir / "bad.bin"), MalformedInput);
}

TEST(ReadKittiBin, MissingFileIsIoError) {
  EXPECT_THROW(read_kitti_bin("/nonexistent/riup/scan.bin"), IoError);
}

TEST(ReadKittiBin, DecodedFloatsBitMatchSource) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint32_t> bits;
  std::vector<char> bytes;
  std::vector<std::uint32_t> words;
  while (words.size() < 4 * 500) {
    const std::uint32_t w = bits(rng);
    float f;
    std::memcpy(&f, &w, 4);
    if (!std::isfinite(f)) continue;
    words.push_back(w);
    put_f32(bytes, f);
  }
  const auto cloud = decode_kitti_bin(bytes);
  ASSERT_EQ(cloud.size(), 500u);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float got[4] = {cloud.points[i].x, cloud.points[i].y, cloud.points[i].z, (*cloud.intensity)[i]};
    for (int k = 0; k < 4; ++k) {
      std::uint32_t w;
      std::memcpy(&w, &got[k], 4);
      ASSERT_EQ(w, words[4 * i + static_cast<std::size_t>(k)]);
    }
  }
}

// Runs only when RIUP_KITTI_BIN points at a real Velodyne scan.
TEST(ReadKittiBin, RealScanHasPlausibleShape) {
  const char* path = std::getenv("RIUP_KITTI_BIN");
  if (!path) GTEST_SKIP() << "RIUP_KITTI_BIN not set";
  std::ifstream in(path, std::ios::binary);
  std::vector<float> raw;
  float f;
  while (in.read(reinterpret_cast<char*>(&f), 4)) raw.push_back(f);
  const auto cloud = read_kitti_bin(path);
  ASSERT_EQ(cloud.size() * 4, raw.size());
  EXPECT_GT(cloud.size(), 80000u);
  EXPECT_LT(cloud.size(), 160000u);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_LT(point_range(cloud.points[i]), 120.0f);
    ASSERT_EQ(cloud.points[i].x, raw[4 * i]);
  }
}

// Minimal PLY parser kept separate from read_ply.
struct ParsedPly {
  std::size_t vertices = 0;
  bool has_color = false;
  std::vector<float> xyz;
  std::vector<unsigned char> rgb;
};

ParsedPly parse_ply(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  ParsedPly out;
  std::string line;
  while (std::getline(in, line) && line != "end_header") {
    if (line.rfind("element vertex ", 0) == 0) out.vertices = std::stoul(line.substr(15));
    if (line == "property uchar red") out.has_color = true;
  }
  for (std::size_t i = 0; i < out.vertices; ++i) {
    for (int k = 0; k < 3; ++k) {
      float f;
      in.read(reinterpret_cast<char*>(&f), 4);
      out.xyz.push_back(f);
    }
    if (out.has_color) {
      unsigned char c[3];
      in.read(reinterpret_cast<char*>(c), 3);
      out.rgb.insert(out.rgb.end(), c, c + 3);
    }
  }
  return out;
}

TEST(WritePly, HeaderDeclaresVertexCount) {
  TempDir dir("ply");
  PointCloud cloud;
  cloud.points = {{1, 2, 3}, {4, 5, 6}};
  write_ply(cloud, dir / "two.ply");
  std::ifstream in(dir / "two.ply");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("format binary_little_endian 1.0\n"), std::string::npos);
  EXPECT_NE(ss.str().find("element vertex 2\n"), std::string::npos);
}

TEST(WritePly, ColorLengthMismatchIsPreconditionError) {
  TempDir dir("ply");
  PointCloud cloud;
  cloud.points = {{1, 2, 3}, {4, 5, 6}};
  EXPECT_THROW(write_ply(cloud, dir / "bad.ply", std::vector<Rgb8>(1)), PreconditionError);
}

TEST(WritePly, UnwritablePathIsIoError) {
  PointCloud cloud;
  cloud.points = {{1, 2, 3}};
  EXPECT_THROW(write_ply(cloud, "/nonexistent/riup/out.ply"), IoError);
}

TEST(WritePly, IndependentParserRecoversExactFloats) {
  TempDir dir("ply");
  const auto cloud = synth_scene(3);
  std::vector<Rgb8> color(cloud.size());
  for (std::size_t i = 0; i < color.size(); ++i) color[i] = {static_cast<std::uint8_t>(i), 7, 200};
  write_ply(cloud, dir / "plain.ply");
  write_ply(cloud, dir / "color.ply", color);

  for (const char* name : {"plain.ply", "color.ply"}) {
    const auto parsed = parse_ply(dir / name);
    ASSERT_EQ(parsed.vertices, cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      ASSERT_EQ(std::memcmp(&parsed.xyz[3 * i], &cloud.points[i], 12), 0) << name << " vertex " << i;
    }
  }
  const auto colored = parse_ply(dir / "color.ply");
  ASSERT_TRUE(colored.has_color);
  EXPECT_EQ(colored.rgb[3 * 5], 5);
  EXPECT_EQ(colored.rgb[3 * 5 + 2], 200);

  EXPECT_EQ(read_ply(dir / "color.ply").points, cloud.points);
}

TEST(KittiBin, WriteThenReadIsLossless) {
  TempDir dir("kitti");
  const auto cloud = synth_scene(1);
  write_kitti_bin(cloud, dir / "s.bin");
  EXPECT_EQ(read_kitti_bin(dir / "s.bin"), cloud);
}

PointCloud on_x_axis(std::initializer_list<float> ranges) {
  PointCloud c;
  for (float r : ranges) c.points.push_back({r, 0, 0});
  c.intensity = std::vector<float>(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) (*c.intensity)[i] = static_cast<float>(i);
  return c;
}

TEST(FilterByRange, KeepsOnlyInBandPoints) {
  const auto out = filter_by_range(on_x_axis({0.5f, 5.0f, 200.0f}), 2.0, 120.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.points[0].x, 5.0f);
  EXPECT_EQ((*out.intensity)[0], 1.0f);
}

TEST(FilterByRange, WideBandIsIdentity) {
  const auto cloud = synth_scene(0);
  EXPECT_EQ(filter_by_range(cloud, 0.0, 1e9), cloud);
}

TEST(FilterByRange, RejectsBadBand) {
  EXPECT_THROW(filter_by_range({}, 5.0, 5.0), InvalidArgument);
  EXPECT_THROW(filter_by_range({}, -1.0, 5.0), InvalidArgument);
}

TEST(FilterByRange, MatchesBruteForceRecountAndIsIdempotent) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> coord(-150.0f, 150.0f);
  PointCloud cloud;
  for (int i = 0; i < 20000; ++i) cloud.points.push_back({coord(rng), coord(rng), coord(rng) * 0.02f});
  cloud.points.push_back({2.0f, 0.0f, 0.0f});
  cloud.points.push_back({120.0f, 0.0f, 0.0f});

  std::size_t expected = 0;
  for (const auto& p : cloud.points) {
    const double r = std::hypot(static_cast<double>(p.x), static_cast<double>(p.y), static_cast<double>(p.z));
    if (r >= 2.0 && r <= 120.0) ++expected;
  }
  const auto once = filter_by_range(cloud, 2.0, 120.0);
  EXPECT_EQ(once.size(), expected);
  EXPECT_EQ(filter_by_range(once, 2.0, 120.0), once);
}

TEST(PointCloud, ValidateRejectsNonFiniteAndMismatchedIntensity) {
  PointCloud c;
  c.points = {{1, 2, std::nanf("")}};
  EXPECT_THROW(c.validate(), PreconditionError);
  c.points = {{1, 2, 3}};
  c.intensity = std::vector<float>{0.1f, 0.2f};
  EXPECT_THROW(c.validate(), PreconditionError);
}

}  // namespace
}  // namespace riup
