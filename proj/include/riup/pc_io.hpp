// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riup/errors.hpp"
#include "riup/point_cloud.hpp"

namespace riup {

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

namespace detail {

inline float load_f32_le(const char* bytes) {
  std::uint32_t bits;
  std::memcpy(&bits, bytes, 4);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  return std::bit_cast<float>(bits);
}

inline void store_f32_le(float value, char* bytes) {
  auto bits = std::bit_cast<std::uint32_t>(value);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  std::memcpy(bytes, &bits, 4);
}

inline std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  return data;
}

inline void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

}  // namespace detail

/// Decodes a KITTI Velodyne scan: headerless 16-byte records of
/// little-endian float32 (x, y, z, reflectance).
inline PointCloud decode_kitti_bin(const std::vector<char>& bytes, const std::string& origin = "buffer") {
  constexpr std::size_t kRecord = 16;
  if (bytes.size() % kRecord != 0) {
    throw MalformedInput("'" + origin + "': size " + std::to_string(bytes.size()) +
                         " is not a multiple of 16 bytes");
  }
  const std::size_t n = bytes.size() / kRecord;
  PointCloud cloud;
  cloud.points.resize(n);
  auto& intensity = cloud.intensity.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    const char* rec = bytes.data() + i * kRecord;
    cloud.points[i] = {detail::load_f32_le(rec), detail::load_f32_le(rec + 4), detail::load_f32_le(rec + 8)};
    intensity[i] = detail::load_f32_le(rec + 12);
  }
  return cloud;
}

inline PointCloud read_kitti_bin(const std::filesystem::path& path) {
  return decode_kitti_bin(detail::slurp(path), path.string());
}

/// Writes the KITTI layout; missing intensity is written as 0.
inline void write_kitti_bin(const PointCloud& cloud, const std::filesystem::path& path) {
  cloud.validate();
  std::string bytes(cloud.size() * 16, '\0');
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    char* rec = bytes.data() + i * 16;
    const auto& p = cloud.points[i];
    detail::store_f32_le(p.x, rec);
    detail::store_f32_le(p.y, rec + 4);
    detail::store_f32_le(p.z, rec + 8);
    detail::store_f32_le(cloud.intensity ? (*cloud.intensity)[i] : 0.0f, rec + 12);
  }
  detail::dump(path, bytes);
}

/// Binary little-endian PLY with float x/y/z and, when `color` is given,
/// uchar red/green/blue per vertex.
inline void write_ply(const PointCloud& cloud, const std::filesystem::path& path,
                      const std::optional<std::vector<Rgb8>>& color = std::nullopt) {
  if (color && color->size() != cloud.size()) {
    throw PreconditionError("color length " + std::to_string(color->size()) +
                            " does not match point count " + std::to_string(cloud.size()));
  }
  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\n"
         << "element vertex " << cloud.size() << "\n"
         << "property float x\nproperty float y\nproperty float z\n";
  if (color) header << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  header << "end_header\n";

  std::string bytes = header.str();
  const std::size_t stride = color ? 15 : 12;
  const std::size_t body = bytes.size();
  bytes.resize(body + cloud.size() * stride);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    char* rec = bytes.data() + body + i * stride;
    const auto& p = cloud.points[i];
    detail::store_f32_le(p.x, rec);
    detail::store_f32_le(p.y, rec + 4);
    detail::store_f32_le(p.z, rec + 8);
    if (color) {
      const auto& c = (*color)[i];
      rec[12] = static_cast<char>(c.r);
      rec[13] = static_cast<char>(c.g);
      rec[14] = static_cast<char>(c.b);
    }
  }
  detail::dump(path, bytes);
}

/// Reads the PLY flavour produced by write_ply (binary little endian, vertex
/// element whose first three properties are float x/y/z). Extra vertex
/// properties are skipped when their types are known.
inline PointCloud read_ply(const std::filesystem::path& path) {
  const auto bytes = detail::slurp(path);
  const std::string name = path.string();
  const std::string text(bytes.begin(), bytes.end());
  const auto end = text.find("end_header\n");
  if (text.rfind("ply\n", 0) != 0 || end == std::string::npos) {
    throw MalformedInput("'" + name + "' is not a PLY file");
  }
  std::istringstream header(text.substr(0, end));
  std::string line;
  std::size_t count = 0;
  bool in_vertex = false, binary_le = false;
  std::vector<std::pair<std::string, std::size_t>> props;  // name, byte size
  auto type_size = [&](const std::string& t) -> std::size_t {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "float" || t == "int32" || t == "uint32" || t == "float32") return 4;
    if (t == "double" || t == "float64") return 8;
    throw MalformedInput("'" + name + "': unsupported PLY property type " + t);
  };
  while (std::getline(header, line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "format") {
      std::string fmt;
      ls >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (kw == "element") {
      std::string el;
      ls >> el;
      in_vertex = el == "vertex";
      if (in_vertex) ls >> count;
      else if (count == 0) throw MalformedInput("'" + name + "': vertex element must come first");
    } else if (kw == "property" && in_vertex) {
      std::string type, pname;
      ls >> type >> pname;
      if (type == "list") throw MalformedInput("'" + name + "': list properties on vertices unsupported");
      props.emplace_back(pname, type_size(type));
    }
  }
  if (!binary_le) throw MalformedInput("'" + name + "': only binary_little_endian PLY is supported");
  if (props.size() < 3 || props[0].first != "x" || props[1].first != "y" || props[2].first != "z" ||
      props[0].second != 4 || props[1].second != 4 || props[2].second != 4) {
    throw MalformedInput("'" + name + "': vertex must start with float x, y, z");
  }
  std::size_t stride = 0;
  for (const auto& p : props) stride += p.second;
  const std::size_t body = end + std::string("end_header\n").size();
  if (bytes.size() < body + count * stride) throw MalformedInput("'" + name + "': truncated vertex data");
  PointCloud cloud;
  cloud.points.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const char* rec = bytes.data() + body + i * stride;
    cloud.points[i] = {detail::load_f32_le(rec), detail::load_f32_le(rec + 4), detail::load_f32_le(rec + 8)};
  }
  return cloud;
}

}  // namespace riup
