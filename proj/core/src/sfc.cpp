// Copyright 2026 The OmniEvent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "omnievent/sfc.hpp"

#include <cmath>
#include <string>

#include "omnievent/error.hpp"

namespace omnievent::sfc {

std::string_view to_string(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::kHilbert:
      return "hilbert";
    case CurveKind::kHilbertTrans:
      return "hilbert-trans";
    case CurveKind::kZ:
      return "z";
    case CurveKind::kZTrans:
      return "z-trans";
  }
  return "unknown";
}

std::optional<CurveKind> parse_curve_kind(std::string_view name) noexcept {
  for (auto kind : {CurveKind::kHilbert, CurveKind::kHilbertTrans, CurveKind::kZ, CurveKind::kZTrans}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

void CurveOrder::validate() const {
  if (dims < 1 || dims > kMaxDims) throw ParameterError("curve dims must be 1, 2 or 3");
  if (bits < 1 || bits > kMaxBits) throw ParameterError("curve bits per axis must be in [1, 21]");
}

std::uint32_t quantize(double coord, double grid, int bits) {
  const double max_cell = static_cast<double>((std::uint32_t{1} << bits) - 1);
  if (!std::isfinite(coord) || !(grid > 0.0)) return 0;
  const double cell = std::floor(coord / grid);
  if (!(cell > 0.0)) return 0;
  return static_cast<std::uint32_t>(std::min(cell, max_cell));
}

Cells quantize_point(std::span<const double> coords, int bits) {
  Cells cells{};
  const double grid = std::ldexp(1.0, -bits);
  for (std::size_t i = 0; i < coords.size() && i < cells.size(); ++i) cells[i] = quantize(coords[i], grid, bits);
  return cells;
}

Cells transpose_axes(const Cells& c, int dims) noexcept {
  switch (dims) {
    case 2:
      return {c[1], c[0], 0};
    case 3:
      return {c[1], c[2], c[0]};
    default:
      return c;
  }
}

Cells untranspose_axes(const Cells& c, int dims) noexcept {
  switch (dims) {
    case 2:
      return {c[1], c[0], 0};
    case 3:
      return {c[2], c[0], c[1]};
    default:
      return c;
  }
}

namespace {

bool is_trans(CurveKind kind) { return kind == CurveKind::kHilbertTrans || kind == CurveKind::kZTrans; }
bool is_hilbert(CurveKind kind) { return kind == CurveKind::kHilbert || kind == CurveKind::kHilbertTrans; }

std::uint64_t z_encode(const Cells& c, int dims, int bits) {
  std::uint64_t code = 0;
  for (int b = 0; b < bits; ++b) {
    for (int d = 0; d < dims; ++d) {
      code |= static_cast<std::uint64_t>((c[d] >> b) & 1U) << (b * dims + d);
    }
  }
  return code;
}

Cells z_decode(std::uint64_t code, int dims, int bits) {
  Cells c{};
  for (int b = 0; b < bits; ++b) {
    for (int d = 0; d < dims; ++d) {
      c[d] |= static_cast<std::uint32_t>((code >> (b * dims + d)) & 1U) << b;
    }
  }
  return c;
}

// Skilling, "Programming the Hilbert curve" (2004). X holds the axes on entry and
// the "transposed" Hilbert index on exit: bit k of the index's (bits-1-k)-th
// dims-wide group comes from X[0..dims) at bit position k, X[0] most significant.
void axes_to_transpose(Cells& x, int dims, int bits) {
  const std::uint32_t m = std::uint32_t{1} << (bits - 1);
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    const std::uint32_t p = q - 1;
    for (int i = 0; i < dims; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        const std::uint32_t t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  for (int i = 1; i < dims; ++i) x[i] ^= x[i - 1];
  std::uint32_t t = 0;
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    if (x[dims - 1] & q) t ^= q - 1;
  }
  for (int i = 0; i < dims; ++i) x[i] ^= t;
}

void transpose_to_axes(Cells& x, int dims, int bits) {
  const std::uint32_t n = std::uint32_t{2} << (bits - 1);
  std::uint32_t t = x[dims - 1] >> 1;
  for (int i = dims - 1; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;
  for (std::uint32_t q = 2; q != n; q <<= 1) {
    const std::uint32_t p = q - 1;
    for (int i = dims - 1; i >= 0; --i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
}

std::uint64_t pack_transpose(const Cells& x, int dims, int bits) {
  std::uint64_t code = 0;
  for (int b = bits - 1; b >= 0; --b) {
    for (int d = 0; d < dims; ++d) code = (code << 1) | ((x[d] >> b) & 1U);
  }
  return code;
}

Cells unpack_transpose(std::uint64_t code, int dims, int bits) {
  Cells x{};
  int shift = dims * bits;
  for (int b = bits - 1; b >= 0; --b) {
    for (int d = 0; d < dims; ++d) {
      --shift;
      x[d] |= static_cast<std::uint32_t>((code >> shift) & 1U) << b;
    }
  }
  return x;
}

std::uint64_t encode_unchecked(const Cells& cells, const CurveOrder& order) {
  if (order.dims == 1) return cells[0];
  Cells c = is_trans(order.kind) ? transpose_axes(cells, order.dims) : cells;
  if (!is_hilbert(order.kind)) return z_encode(c, order.dims, order.bits);
  axes_to_transpose(c, order.dims, order.bits);
  return pack_transpose(c, order.dims, order.bits);
}

}  // namespace

std::uint64_t encode(const Cells& cells, const CurveOrder& order) {
  order.validate();
  for (int d = 0; d < order.dims; ++d) {
    if (cells[d] > order.max_cell()) {
      throw RangeError("cell " + std::to_string(cells[d]) + " on axis " + std::to_string(d) + " exceeds " +
                       std::to_string(order.max_cell()));
    }
  }
  return encode_unchecked(cells, order);
}

Cells decode(std::uint64_t code, const CurveOrder& order) {
  order.validate();
  if (code >= order.code_space()) {
    throw RangeError("curve code " + std::to_string(code) + " is outside the code space");
  }
  if (order.dims == 1) return {static_cast<std::uint32_t>(code), 0, 0};
  Cells c;
  if (is_hilbert(order.kind)) {
    c = unpack_transpose(code, order.dims, order.bits);
    transpose_to_axes(c, order.dims, order.bits);
  } else {
    c = z_decode(code, order.dims, order.bits);
  }
  return is_trans(order.kind) ? untranspose_axes(c, order.dims) : c;
}

std::vector<std::uint64_t> encode_all(std::span<const Cells> cells, const CurveOrder& order) {
  order.validate();
  std::vector<std::uint64_t> codes;
  codes.reserve(cells.size());
  for (const auto& c : cells) {
    for (int d = 0; d < order.dims; ++d) {
      if (c[d] > order.max_cell()) throw RangeError("cell exceeds the curve grid");
    }
    codes.push_back(encode_unchecked(c, order));
  }
  return codes;
}

}  // namespace omnievent::sfc
