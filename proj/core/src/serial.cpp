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

#include "omnievent/serial.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <string>

#include "omnievent/error.hpp"
#include "omnievent/random.hpp"

namespace omnievent::serial {

std::string_view to_string(BranchKind kind) noexcept {
  switch (kind) {
    case BranchKind::kSpatial:
      return "S";
    case BranchKind::kTemporal:
      return "T";
    case BranchKind::kSpatioTemporal:
      return "ST";
  }
  return "?";
}

int branch_dims(BranchKind kind) noexcept {
  switch (kind) {
    case BranchKind::kSpatial:
      return 2;
    case BranchKind::kTemporal:
      return 1;
    case BranchKind::kSpatioTemporal:
      return 3;
  }
  return 0;
}

BranchConfig BranchConfig::defaults(BranchKind kind) {
  using sfc::CurveKind;
  BranchConfig cfg;
  cfg.branch = kind;
  if (kind == BranchKind::kSpatioTemporal) {
    cfg.orders = {CurveKind::kZ, CurveKind::kZTrans, CurveKind::kHilbert, CurveKind::kHilbertTrans};
    const std::array<int, 5> depths{2, 2, 2, 6, 2};
    const std::array<int, 5> channels{32, 64, 128, 256, 512};
    const std::array<int, 5> heads{2, 4, 8, 16, 32};
    for (std::size_t i = 0; i < depths.size(); ++i) cfg.encoder.push_back({depths[i], channels[i], heads[i], 512});
    const std::array<int, 4> dec_channels{64, 64, 128, 256};
    const std::array<int, 4> dec_heads{4, 4, 8, 16};
    for (std::size_t i = 0; i < dec_channels.size(); ++i) cfg.decoder.push_back({2, dec_channels[i], dec_heads[i], 512});
    cfg.pool_shifts = {5, 3, 3, 3};
  } else {
    cfg.orders = {CurveKind::kHilbert, CurveKind::kHilbertTrans};
    cfg.encoder = {{2, 64, 4, 512}, {2, 128, 8, 512}, {2, 256, 16, 512}};
    cfg.decoder = {{2, 64, 4, 512}, {2, 128, 8, 512}};
    cfg.pool_shifts = {5, 3};
  }
  return cfg;
}

namespace {

void check_stage(const StageConfig& s, const std::string& where) {
  if (s.depth < 0) throw ParameterError(where + ": depth must be non-negative");
  if (s.channels < 1) throw ParameterError(where + ": channels must be positive");
  if (s.heads < 1 || s.channels % s.heads != 0) {
    throw ParameterError(where + ": head count must divide the channel count");
  }
  if (s.patch_size < 1) throw ParameterError(where + ": patch size must be positive");
}

}  // namespace

void BranchConfig::validate() const {
  const std::string name{to_string(branch)};
  if (orders.empty()) throw ParameterError(name + " branch has no curve orders");
  if (branch != BranchKind::kSpatioTemporal) {
    for (auto o : orders) {
      if (o != sfc::CurveKind::kHilbert && o != sfc::CurveKind::kHilbertTrans) {
        throw ParameterError(name + " branch only admits hilbert and hilbert-trans orders");
      }
    }
  }
  if (encoder.empty()) throw ParameterError(name + " branch needs at least one encoder stage");
  if (decoder.size() + 1 != encoder.size() && !(decoder.empty() && encoder.size() == 1)) {
    throw ParameterError(name + " branch needs one decoder stage per pooling step");
  }
  if (pool_shifts.size() + 1 != encoder.size()) {
    throw ParameterError(name + " branch needs one pool shift per encoder stage after the first");
  }
  for (int s : pool_shifts) {
    if (s < 1) throw ParameterError(name + " branch pool shifts must be >= 1");
  }
  for (std::size_t i = 0; i < encoder.size(); ++i) check_stage(encoder[i], name + " encoder stage " + std::to_string(i));
  for (std::size_t i = 0; i < decoder.size(); ++i) check_stage(decoder[i], name + " decoder stage " + std::to_string(i));
  if (input_channels < 1) throw ParameterError(name + " branch input channels must be positive");
  if (mlp_ratio < 1) throw ParameterError(name + " branch mlp ratio must be positive");
  sfc::CurveOrder{orders.front(), dims(), bits}.validate();
}

std::vector<sfc::Cells> branch_cells(const EventBatch& batch, BranchKind kind, int bits) {
  std::vector<sfc::Cells> cells;
  cells.reserve(batch.size());
  for (const auto& e : batch.events) {
    switch (kind) {
      case BranchKind::kSpatial: {
        const std::array<double, 2> c{e.x1, e.x2};
        cells.push_back(sfc::quantize_point(c, bits));
        break;
      }
      case BranchKind::kTemporal: {
        const std::array<double, 1> c{e.x3};
        cells.push_back(sfc::quantize_point(c, bits));
        break;
      }
      case BranchKind::kSpatioTemporal: {
        const std::array<double, 3> c{e.x1, e.x2, e.x3};
        cells.push_back(sfc::quantize_point(c, bits));
        break;
      }
    }
  }
  return cells;
}

sfc::CurveOrder select_order(int layer_index, const BranchConfig& branch, std::uint64_t seed) {
  if (branch.orders.empty()) throw ParameterError("branch has no curve orders to select from");
  const auto stream = (static_cast<std::uint64_t>(branch.branch) << 32) | static_cast<std::uint32_t>(layer_index);
  Rng rng(derive_seed(seed, stream));
  const auto pick = uniform_index(rng, branch.orders.size());
  return {branch.orders[pick], branch.dims(), branch.bits};
}

SerializedBatch serialize_codes(std::vector<std::uint64_t> codes, const sfc::CurveOrder& order, int patch_size) {
  if (patch_size < 1) throw ParameterError("patch size must be positive");
  SerializedBatch out;
  out.order = order;
  out.codes = std::move(codes);
  out.perm.resize(out.codes.size());
  std::iota(out.perm.begin(), out.perm.end(), std::uint32_t{0});
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&c = out.codes](std::uint32_t a, std::uint32_t b) { return c[a] < c[b]; });
  const auto p = static_cast<std::size_t>(patch_size);
  for (std::size_t begin = 0; begin < out.perm.size(); begin += p) {
    out.patches.push_back({begin, std::min(begin + p, out.perm.size())});
  }
  return out;
}

SerializedBatch serialize(const EventBatch& batch, const sfc::CurveOrder& order, const BranchConfig& branch) {
  if (order.dims != branch.dims()) throw ParameterError("curve dimensionality does not match the branch");
  const auto cells = branch_cells(batch, branch.branch, order.bits);
  return serialize_codes(sfc::encode_all(cells, order), order, branch.encoder.front().patch_size);
}

PoolMap make_pool_map(const SerializedBatch& serialized, int shift) {
  if (shift < 1) throw ParameterError("pool shift must be at least 1 bit");
  const auto shifted = [shift](std::uint64_t code) { return shift >= 64 ? std::uint64_t{0} : code >> shift; };

  PoolMap map;
  const std::size_t n = serialized.perm.size();
  map.group_of.resize(n);
  map.members.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t idx = serialized.perm[k];
    const std::uint64_t code = shifted(serialized.codes[idx]);
    if (map.pooled_codes.empty() || map.pooled_codes.back() != code) {
      map.pooled_codes.push_back(code);
      map.representative.push_back(idx);
      map.offsets.push_back(static_cast<std::uint32_t>(k));
    }
    map.group_of[idx] = static_cast<std::uint32_t>(map.representative.size() - 1);
    map.members.push_back(idx);
  }
  map.offsets.push_back(static_cast<std::uint32_t>(n));
  return map;
}

std::pair<Matrix, PoolMap> grid_pool(const SerializedBatch& serialized, const Matrix& features, int shift) {
  if (static_cast<std::size_t>(features.rows()) != serialized.perm.size()) {
    throw ShapeError("grid_pool: one feature row per point is required");
  }
  PoolMap map = make_pool_map(serialized, shift);
  Matrix pooled(static_cast<Eigen::Index>(map.group_count()), features.cols());
  for (std::size_t g = 0; g < map.group_count(); ++g) {
    const auto row = static_cast<Eigen::Index>(g);
    pooled.row(row) = features.row(map.members[map.offsets[g]]);
    for (auto m = map.offsets[g] + 1; m < map.offsets[g + 1]; ++m) {
      pooled.row(row) = pooled.row(row).cwiseMax(features.row(map.members[m]));
    }
  }
  return {std::move(pooled), std::move(map)};
}

Matrix unpool(const Matrix& pooled, const PoolMap& map) {
  if (static_cast<std::size_t>(pooled.rows()) != map.group_count()) {
    throw ShapeError("unpool: pooled rows do not match the pool map's group count");
  }
  Matrix out(static_cast<Eigen::Index>(map.point_count()), pooled.cols());
  for (std::size_t i = 0; i < map.point_count(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = pooled.row(map.group_of[i]);
  }
  return out;
}

std::uint64_t receptive_field(std::uint64_t patch_size, int shift, int layers) {
  if (patch_size < 1) throw ParameterError("receptive_field: patch size must be positive");
  if (shift < 0 || layers < 0) throw ParameterError("receptive_field: shift and layer count must be non-negative");
  const std::vector<int> shifts(static_cast<std::size_t>(layers), shift);
  return receptive_field(patch_size, shifts);
}

std::uint64_t receptive_field(std::uint64_t patch_size, std::span<const int> shifts) {
  if (patch_size < 1) throw ParameterError("receptive_field: patch size must be positive");
  int total = 0;
  for (int s : shifts) {
    if (s < 0) throw ParameterError("receptive_field: shifts must be non-negative");
    total += s;
  }
  const int width = std::bit_width(patch_size);
  if (total + width > 64) throw RangeError("receptive field overflows 64 bits");
  return patch_size << total;
}

}  // namespace omnievent::serial
