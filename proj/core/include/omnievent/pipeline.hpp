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

#ifndef OMNIEVENT_PIPELINE_HPP
#define OMNIEVENT_PIPELINE_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "omnievent/config.hpp"
#include "omnievent/event_io.hpp"
#include "omnievent/event_model.hpp"
#include "omnievent/nn/layers.hpp"
#include "omnievent/serial.hpp"
#include "omnievent/sta.hpp"
#include "omnievent/tensorize.hpp"

namespace omnievent {

struct LevelTrace {
  sfc::CurveKind order = sfc::CurveKind::kHilbert;
  std::size_t points = 0;
  std::size_t patches = 0;
  int shift = 0;  // cumulative shift applied to reach this level
};

struct BranchTrace {
  serial::BranchKind branch = serial::BranchKind::kSpatial;
  std::vector<LevelTrace> levels;
};

/// One decoupled branch: embedding, serialized patch-attention encoder with
/// shift pooling, and a decoder that restores full resolution through skip
/// connections. Output is N x output_channels in input point order.
class BranchNetwork {
 public:
  BranchNetwork() = default;
  BranchNetwork(const serial::BranchConfig& config, Rng& rng);

  nn::Var forward(const EventBatch& batch, std::uint64_t order_seed, BranchTrace* trace = nullptr) const;
  void collect(const std::string& prefix, nn::ParameterList& out) const;

  serial::BranchConfig config;
  nn::Embedding embed;
  std::vector<nn::Linear> down;  // before pooling step l: encoder[l] -> encoder[l + 1] channels
  std::vector<std::vector<nn::EncoderBlock>> encoder;
  std::vector<nn::Linear> up;    // decoder stage l: deeper features -> decoder[l] channels
  std::vector<nn::Linear> skip;  // decoder stage l: encoder[l] -> decoder[l] channels
  std::vector<std::vector<nn::EncoderBlock>> decoder;
};

/// Full learned pipeline: three branches, STA fusion and the FT pre-map.
class Model {
 public:
  Model() = default;
  /// Validates the config, initializes parameters from its seed and loads
  /// `weights` when set.
  explicit Model(const PipelineConfig& config);

  /// Per-point fused features, N x 2C.
  nn::Var features(const EventBatch& batch, std::vector<BranchTrace>* trace = nullptr) const;
  /// Learned grid channels, (H*W) x 2C.
  nn::Var grid(const EventBatch& batch) const;

  nn::ParameterList parameters() const;

  PipelineConfig config;
  BranchNetwork spatial;
  BranchNetwork temporal;
  BranchNetwork spatiotemporal;
  sta::StaModule sta;
  ft::Tensorizer tensorizer;
};

/// Seed streams derived from the run seed.
inline constexpr std::uint64_t kModelStream = 1;
inline constexpr std::uint64_t kSampleStream = 2;
inline constexpr std::uint64_t kOrderStream = 3;

/// Fusion and sampling with the config's T, M and seed.
EventBatch prepare_batch(std::span<const Event> events, const PipelineConfig& config);

ft::GridTensor tensorize(std::span<const Event> events, const Model& model);
ft::GridTensor tensorize(std::span<const Event> events, const PipelineConfig& config);

/// Buffer entry point: records in the EVT1 layout plus config text. Output is
/// identical to the CLI `tensorize` artifact for the same inputs.
ft::GridTensor tensorize_records(std::span<const PackedEventRecord> records, std::string_view config_text);

/// The exact bytes of the OMNX container for `tensor`.
std::vector<char> omnx_bytes(const ft::GridTensor& tensor);

}  // namespace omnievent

#endif  // OMNIEVENT_PIPELINE_HPP
