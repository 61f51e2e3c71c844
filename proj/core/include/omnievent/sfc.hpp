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

#ifndef OMNIEVENT_SFC_HPP
#define OMNIEVENT_SFC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omnievent::sfc {

enum class CurveKind { kHilbert, kHilbertTrans, kZ, kZTrans };

/// Names as used in configuration files: "hilbert", "hilbert-trans", "z", "z-trans".
std::string_view to_string(CurveKind kind) noexcept;
std::optional<CurveKind> parse_curve_kind(std::string_view name) noexcept;

inline constexpr int kMaxDims = 3;
inline constexpr int kMaxBits = 21;

/// Grid coordinates of one point; only the first `dims` entries are used.
using Cells = std::array<std::uint32_t, kMaxDims>;

/// A curve together with its grid: `dims` axes of `bits` bits each.
struct CurveOrder {
  CurveKind kind = CurveKind::kHilbert;
  int dims = 2;
  int bits = 10;

  /// Throws ParameterError unless dims in [1, 3] and bits in [1, 21].
  void validate() const;
  std::uint64_t code_space() const noexcept { return std::uint64_t{1} << (dims * bits); }
  std::uint32_t max_cell() const noexcept { return (std::uint32_t{1} << bits) - 1; }

  friend bool operator==(const CurveOrder&, const CurveOrder&) = default;
};

/// floor(coord / grid) clamped to [0, 2^bits - 1]. Non-finite coordinates map to 0.
std::uint32_t quantize(double coord, double grid, int bits);

/// Quantizes `coords` with grid 2^-bits, the default on normalized coordinates.
Cells quantize_point(std::span<const double> coords, int bits);

/// The axis transposition used by the "-trans" kinds: (c0, c1, c2) -> (c1, c2, c0)
/// in 3-D, (c0, c1) -> (c1, c0) in 2-D, and the identity in 1-D.
Cells transpose_axes(const Cells& cells, int dims) noexcept;
Cells untranspose_axes(const Cells& cells, int dims) noexcept;

/// Bijection from the grid onto [0, 2^(dims*bits)).
///
/// Z order interleaves bits with axis 0 in the least-significant position.
/// Hilbert uses Skilling's transpose transform; in 2-D the visiting order is
/// the classic one starting (0,0) -> (0,1) -> (1,1) -> (1,0), i.e. the first
/// move is along axis 1. For dims == 1 every kind is the identity.
/// Throws RangeError when a cell exceeds 2^bits - 1.
std::uint64_t encode(const Cells& cells, const CurveOrder& order);

/// Inverse of encode. Throws RangeError for codes outside the code space.
Cells decode(std::uint64_t code, const CurveOrder& order);

/// Encodes many points at once (rows of `cells`), skipping per-call validation.
std::vector<std::uint64_t> encode_all(std::span<const Cells> cells, const CurveOrder& order);

}  // namespace omnievent::sfc

#endif  // OMNIEVENT_SFC_HPP
