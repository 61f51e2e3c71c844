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

#ifndef OMNIEVENT_CONFIG_HPP
#define OMNIEVENT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "omnievent/event_model.hpp"
#include "omnievent/nn/tensor.hpp"
#include "omnievent/serial.hpp"
#include "omnievent/sta.hpp"

namespace omnievent {

/// Everything a tensorize run depends on. Parsed from a flat `key = value`
/// text file; see configs/default.conf for the documented schema.
struct PipelineConfig {
  CameraGeometry geometry;
  int segments = 8;
  int samples = 4096;
  std::uint64_t seed = 0;
  bool normalize_h_by_H = false;
  serial::BranchConfig spatial = serial::BranchConfig::defaults(serial::BranchKind::kSpatial);
  serial::BranchConfig temporal = serial::BranchConfig::defaults(serial::BranchKind::kTemporal);
  serial::BranchConfig spatiotemporal = serial::BranchConfig::defaults(serial::BranchKind::kSpatioTemporal);
  int sta_rounds = 4;
  int sta_fc_hidden = 64;
  int sta_mlp_ratio = 4;
  nn::Reduce reduce = nn::Reduce::kMax;
  int threads = 1;
  std::string weights;  // optional OMNT checkpoint

  /// Keys assigned explicitly by a file or override.
  std::set<std::string> assigned;

  bool was_set(const std::string& key) const { return assigned.count(key) != 0; }

  const serial::BranchConfig& branch(serial::BranchKind kind) const;
  serial::BranchConfig& branch(serial::BranchKind kind);

  /// STA config implied by the branches: C is the shared branch output width, N = samples.
  sta::StaConfig sta() const;

  /// Throws ParameterError on any bound violated by the owning modules.
  void validate() const;
};

/// Applies one `key = value` assignment. Throws ConfigError(line) on unknown
/// keys or malformed values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value, std::size_t line = 0);

/// Applies a `key=value` override (as given on a command line).
void apply_override(PipelineConfig& config, std::string_view assignment);

/// Parses config text on top of the defaults. '#' starts a comment.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Serializes every key; parse_config(config_to_text(c)) reproduces c.
std::string config_to_text(const PipelineConfig& config);

}  // namespace omnievent

#endif  // OMNIEVENT_CONFIG_HPP
