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

#ifndef OMNIEVENT_SERIAL_HPP
#define OMNIEVENT_SERIAL_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "omnievent/event_model.hpp"
#include "omnievent/sfc.hpp"

namespace omnievent::serial {

/// Which coordinates a branch measures distance on: (x1, x2), (x3) or (x1, x2, x3).
enum class BranchKind { kSpatial, kTemporal, kSpatioTemporal };

std::string_view to_string(BranchKind kind) noexcept;
int branch_dims(BranchKind kind) noexcept;

struct StageConfig {
  int depth = 2;
  int channels = 64;
  int heads = 4;
  int patch_size = 512;
};

/// Layer layout of one aggregation branch. `encoder[0]` runs at full resolution;
/// each later encoder stage is preceded by one grid pooling with the matching
/// entry of `pool_shifts`. `decoder[i]` restores level i from level i + 1.
struct BranchConfig {
  BranchKind branch = BranchKind::kSpatial;
  std::vector<sfc::CurveKind> orders;
  std::vector<StageConfig> encoder;
  std::vector<StageConfig> decoder;
  std::vector<int> pool_shifts;
  int input_channels = kInputFeatures;
  int mlp_ratio = 4;
  int bits = 10;

  /// Layer tables for the three branches: S and T use 3 encoder / 2 decoder
  /// stages over the Hilbert pair, ST uses 5 / 4 over all four curves. The
  /// pooling schedule shifts 5 bits first and 3 bits afterwards.
  static BranchConfig defaults(BranchKind kind);

  int dims() const noexcept { return branch_dims(branch); }
  int output_channels() const noexcept { return decoder.empty() ? encoder.front().channels : decoder.front().channels; }
  /// Throws ParameterError describing the first violated bound.
  void validate() const;
};

/// Grid cells of every point under the branch's coordinates, grid 2^-bits.
std::vector<sfc::Cells> branch_cells(const EventBatch& batch, BranchKind kind, int bits);

struct Patch {
  std::size_t begin = 0;  // offsets into SerializedBatch::perm
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

struct SerializedBatch {
  sfc::CurveOrder order;
  std::vector<std::uint64_t> codes;  // per point, input index order
  std::vector<std::uint32_t> perm;   // perm[k] = input index of the k-th point in curve order
  std::vector<Patch> patches;
};

/// Deterministic uniform pick among the branch's orders for one layer.
sfc::CurveOrder select_order(int layer_index, const BranchConfig& branch, std::uint64_t seed);

/// Sorts points by code (stable on index) and cuts runs of `patch_size`; the
/// final patch holds the remainder when the count is not a multiple.
SerializedBatch serialize_codes(std::vector<std::uint64_t> codes, const sfc::CurveOrder& order,
                                int patch_size);

/// Encodes the branch's coordinates of each point and serializes with the
/// branch's first-stage patch size.
SerializedBatch serialize(const EventBatch& batch, const sfc::CurveOrder& order, const BranchConfig& branch);

/// Grouping produced by a right shift of the curve codes. Groups are numbered
/// in curve order, so the members of each group are consecutive along the curve.
struct PoolMap {
  std::vector<std::uint32_t> group_of;        // per input point
  std::vector<std::uint32_t> representative;  // first member along the curve, per group
  std::vector<std::uint64_t> pooled_codes;    // code >> shift, per group
  std::vector<std::uint32_t> offsets;         // CSR: members of g are members[offsets[g], offsets[g+1])
  std::vector<std::uint32_t> members;

  std::size_t group_count() const noexcept { return representative.size(); }
  std::size_t point_count() const noexcept { return group_of.size(); }
};

/// Throws ParameterError for shift < 1. Shifts of 64 or more collapse everything.
PoolMap make_pool_map(const SerializedBatch& serialized, int shift);

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Max-pools rows of `features` (input index order) over groups of equal
/// shifted code. Returns (group_count x C) features and the grouping.
std::pair<Matrix, PoolMap> grid_pool(const SerializedBatch& serialized, const Matrix& features, int shift);

/// Copies each group's row back to all of its members. Throws ShapeError when
/// `pooled` does not have one row per group.
Matrix unpool(const Matrix& pooled, const PoolMap& map);

/// P * 2^(shift * layers). Throws ParameterError for non-positive P or negative
/// shift / layers, RangeError on 64-bit overflow.
std::uint64_t receptive_field(std::uint64_t patch_size, int shift, int layers);
/// P * 2^(sum of shifts) for a per-layer schedule.
std::uint64_t receptive_field(std::uint64_t patch_size, std::span<const int> shifts);

}  // namespace omnievent::serial

#endif  // OMNIEVENT_SERIAL_HPP
