// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>

#include "riup/errors.hpp"
#include "riup/pc_io.hpp"
#include "riup/range_image.hpp"

namespace riup {

/// Writes a 16-bit binary PGM: depth mapped linearly from [0, max_depth] to
/// [0, 65535], EMPTY to 0. The geometry is recorded in a header comment so
/// read_pgm can restore it.
inline void write_pgm(const RangeImage& ri, const std::filesystem::path& path) {
  const auto& g = ri.geometry();
  std::ostringstream header;
  header.precision(17);
  header << "P5\n# riup pitch_max=" << g.pitch_max << " pitch_min=" << g.pitch_min << " min_depth=" << g.min_depth
         << " max_depth=" << g.max_depth << "\n"
         << g.width << " " << g.height << "\n65535\n";
  std::string bytes = header.str();
  const std::size_t body = bytes.size();
  bytes.resize(body + ri.depth().size() * 2);
  for (std::size_t i = 0; i < ri.depth().size(); ++i) {
    const float d = ri.depth()[i];
    std::uint16_t level = 0;
    if (!is_empty(d)) {
      const double scaled = std::round(static_cast<double>(d) / g.max_depth * 65535.0);
      level = static_cast<std::uint16_t>(std::clamp(scaled, 1.0, 65535.0));
    }
    bytes[body + 2 * i] = static_cast<char>(level >> 8);
    bytes[body + 2 * i + 1] = static_cast<char>(level & 0xff);
  }
  detail::dump(path, bytes);
}

/// Reads a PGM written by write_pgm. Without the geometry comment the
/// fallback geometry supplies FOV and depth range. Decoded depths are clamped
/// into [min_depth, max_depth].
inline RangeImage read_pgm(const std::filesystem::path& path, const RiGeometry& fallback = {}) {
  const auto bytes = detail::slurp(path);
  const std::string name = path.string();
  RiGeometry g = fallback;
  std::size_t pos = 0;
  auto next_token = [&]() {
    std::string tok;
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        const auto eol = std::find(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), '\n');
        std::istringstream comment(std::string(bytes.begin() + static_cast<std::ptrdiff_t>(pos) + 1, eol));
        std::string word;
        while (comment >> word) {
          const auto eq = word.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = word.substr(0, eq);
          const double value = std::stod(word.substr(eq + 1));
          if (key == "pitch_max") g.pitch_max = value;
          else if (key == "pitch_min") g.pitch_min = value;
          else if (key == "min_depth") g.min_depth = value;
          else if (key == "max_depth") g.max_depth = value;
        }
        pos = static_cast<std::size_t>(eol - bytes.begin());
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
        ++pos;
      } else {
        tok += c;
        ++pos;
      }
    }
    return tok;
  };
  if (next_token() != "P5") throw MalformedInput("'" + name + "' is not a binary PGM");
  try {
    g.width = std::stoi(next_token());
    g.height = std::stoi(next_token());
    if (std::stoi(next_token()) != 65535) throw MalformedInput("'" + name + "': expected maxval 65535");
  } catch (const std::logic_error&) {
    throw MalformedInput("'" + name + "': bad PGM header");
  }
  ++pos;  // single whitespace before raster
  g.validate();
  if (bytes.size() < pos + g.pixel_count() * 2) throw MalformedInput("'" + name + "': truncated raster");
  RangeImage ri(g);
  for (std::size_t i = 0; i < g.pixel_count(); ++i) {
    const auto hi = static_cast<std::uint8_t>(bytes[pos + 2 * i]);
    const auto lo = static_cast<std::uint8_t>(bytes[pos + 2 * i + 1]);
    const unsigned level = (static_cast<unsigned>(hi) << 8) | lo;
    if (level == 0) continue;
    const double d = level / 65535.0 * g.max_depth;
    ri.depth()[i] = static_cast<float>(std::clamp(d, g.min_depth, g.max_depth));
  }
  return ri;
}

}  // namespace riup
