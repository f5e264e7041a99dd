// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "riup/errors.hpp"
#include "riup/range_image.hpp"

namespace riup {

/// Uniform depth quantizer. Symbol 0 is reserved for EMPTY; symbols
/// 1 .. 2^bits - 1 carry depth codes 0 .. 2^bits - 2.
struct QuantizerSpec {
  int bits = 12;
  double min_depth = 2.0;
  double max_depth = 120.0;

  void validate() const {
    if (bits < 4 || bits > 16) throw InvalidArgument("quantizer bits must be in [4, 16]");
    if (!(min_depth < max_depth)) throw InvalidArgument("quantizer requires min_depth < max_depth");
  }

  std::uint32_t levels() const { return (std::uint32_t{1} << bits) - 2; }
  double step() const { return (max_depth - min_depth) / levels(); }

  friend bool operator==(const QuantizerSpec&, const QuantizerSpec&) = default;
};

/// Decimation: each output pixel is the top-left pixel of its source block.
inline RangeImage downsample_ri(const RangeImage& ri, int factor_x, int factor_y) {
  if (factor_x < 1 || factor_y < 1) throw InvalidArgument("downsample factors must be >= 1");
  if (ri.width() % factor_x != 0 || ri.height() % factor_y != 0) {
    throw InvalidArgument("downsample factors (" + std::to_string(factor_x) + ", " + std::to_string(factor_y) +
                          ") do not divide " + std::to_string(ri.width()) + "x" + std::to_string(ri.height()));
  }
  RiGeometry g = ri.geometry();
  g.width /= factor_x;
  g.height /= factor_y;
  RangeImage out(g);
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) out.at(v, u) = ri.at(v * factor_y, u * factor_x);
  }
  return out;
}

/// Symbol stored for one depth (0 for EMPTY).
inline std::uint32_t quantize_symbol(float depth, const QuantizerSpec& q) {
  if (is_empty(depth)) return 0;
  if (!(depth >= q.min_depth && depth <= q.max_depth)) {
    throw InvalidArgument("depth " + std::to_string(depth) + " outside quantizer range");
  }
  const double code = std::round((depth - q.min_depth) / (q.max_depth - q.min_depth) * q.levels());
  return static_cast<std::uint32_t>(code) + 1;
}

/// Reconstruction level of a symbol, rounded once to float.
inline float dequantize_symbol(std::uint32_t symbol, const QuantizerSpec& q) {
  if (symbol == 0) return kEmpty;
  const double code = symbol - 1;
  return static_cast<float>(q.min_depth + code * (q.max_depth - q.min_depth) / q.levels());
}

inline RangeImage quantize(const RangeImage& ri, const QuantizerSpec& q) {
  q.validate();
  RangeImage out(ri.geometry());
  for (std::size_t i = 0; i < ri.depth().size(); ++i) {
    out.depth()[i] = dequantize_symbol(quantize_symbol(ri.depth()[i], q), q);
  }
  return out;
}

/// Degradation used by every experiment: decimate, then quantize.
inline RangeImage lossy_roundtrip(const RangeImage& ri, int factor_x, int factor_y, const QuantizerSpec& q) {
  return quantize(downsample_ri(ri, factor_x, factor_y), q);
}

}  // namespace riup
