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

#include "omnievent/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "omnievent/error.hpp"

namespace omnievent {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value, std::size_t line) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(line, fmt::format("'{}' expects a number, got '{}'", key, value));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(line, fmt::format("'{}' expects true or false, got '{}'", key, value));
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    items.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view value, std::size_t line) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  for (auto item : split_list(value)) out.push_back(parse_number<int>(key, item, line));
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// Resizes a stage list to `n` entries, keeping existing values.
void resize_stages(std::vector<serial::StageConfig>& stages, std::size_t n) {
  const serial::StageConfig fill = stages.empty() ? serial::StageConfig{} : stages.back();
  stages.resize(n, fill);
}

void apply_stage_list(std::vector<serial::StageConfig>& stages, std::string_view field, std::string_view key,
                      std::string_view value, std::size_t line) {
  const auto values = parse_int_list(key, value, line);
  if (field == "depths") {
    resize_stages(stages, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) stages[i].depth = values[i];
    return;
  }
  if (values.size() != stages.size()) {
    throw ConfigError(line, fmt::format("'{}' has {} entries but the branch has {} stages (set depths first)", key,
                                        values.size(), stages.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (field == "channels") {
      stages[i].channels = values[i];
    } else if (field == "heads") {
      stages[i].heads = values[i];
    } else {
      stages[i].patch_size = values[i];
    }
  }
}

bool apply_branch_setting(serial::BranchConfig& b, std::string_view field, std::string_view key,
                          std::string_view value, std::size_t line) {
  if (field == "orders") {
    b.orders.clear();
    for (auto item : split_list(value)) {
      const auto kind = sfc::parse_curve_kind(item);
      if (!kind) throw ConfigError(line, fmt::format("'{}': unknown curve order '{}'", key, item));
      b.orders.push_back(*kind);
    }
    return true;
  }
  for (std::string_view prefix : {"enc_", "dec_"}) {
    if (field.substr(0, 4) != prefix) continue;
    const auto sub = field.substr(4);
    if (sub != "depths" && sub != "channels" && sub != "heads" && sub != "patch") return false;
    apply_stage_list(prefix == "enc_" ? b.encoder : b.decoder, sub, key, value, line);
    return true;
  }
  if (field == "pool_shifts") {
    b.pool_shifts = parse_int_list(key, value, line);
  } else if (field == "mlp_ratio") {
    b.mlp_ratio = parse_number<int>(key, value, line);
  } else if (field == "bits") {
    b.bits = parse_number<int>(key, value, line);
  } else {
    return false;
  }
  return true;
}

void write_branch(std::ostringstream& out, std::string_view prefix, const serial::BranchConfig& b) {
  std::string orders;
  for (std::size_t i = 0; i < b.orders.size(); ++i) {
    if (i) orders += ',';
    orders += sfc::to_string(b.orders[i]);
  }
  auto column = [](const std::vector<serial::StageConfig>& stages, int serial::StageConfig::*field) {
    std::vector<int> v;
    for (const auto& s : stages) v.push_back(s.*field);
    return join_ints(v);
  };
  out << prefix << ".orders = " << orders << '\n';
  out << prefix << ".enc_depths = " << column(b.encoder, &serial::StageConfig::depth) << '\n';
  out << prefix << ".enc_channels = " << column(b.encoder, &serial::StageConfig::channels) << '\n';
  out << prefix << ".enc_heads = " << column(b.encoder, &serial::StageConfig::heads) << '\n';
  out << prefix << ".enc_patch = " << column(b.encoder, &serial::StageConfig::patch_size) << '\n';
  out << prefix << ".dec_depths = " << column(b.decoder, &serial::StageConfig::depth) << '\n';
  out << prefix << ".dec_channels = " << column(b.decoder, &serial::StageConfig::channels) << '\n';
  out << prefix << ".dec_heads = " << column(b.decoder, &serial::StageConfig::heads) << '\n';
  out << prefix << ".dec_patch = " << column(b.decoder, &serial::StageConfig::patch_size) << '\n';
  out << prefix << ".pool_shifts = " << join_ints(b.pool_shifts) << '\n';
  out << prefix << ".mlp_ratio = " << b.mlp_ratio << '\n';
  out << prefix << ".bits = " << b.bits << '\n';
}

}  // namespace

const serial::BranchConfig& PipelineConfig::branch(serial::BranchKind kind) const {
  switch (kind) {
    case serial::BranchKind::kSpatial:
      return spatial;
    case serial::BranchKind::kTemporal:
      return temporal;
    default:
      return spatiotemporal;
  }
}

serial::BranchConfig& PipelineConfig::branch(serial::BranchKind kind) {
  return const_cast<serial::BranchConfig&>(std::as_const(*this).branch(kind));
}

sta::StaConfig PipelineConfig::sta() const {
  sta::StaConfig s;
  s.channels = spatial.output_channels();
  s.length = samples;
  s.rounds = sta_rounds;
  s.fc_hidden = sta_fc_hidden;
  s.mlp_ratio = sta_mlp_ratio;
  return s;
}

void PipelineConfig::validate() const {
  geometry.validate();
  if (segments < 1) throw ParameterError("segments must be at least 1");
  if (samples < 1) throw ParameterError("samples must be at least 1");
  if (threads < 1) throw ParameterError("threads must be at least 1");
  if (spatial.branch != serial::BranchKind::kSpatial || temporal.branch != serial::BranchKind::kTemporal ||
      spatiotemporal.branch != serial::BranchKind::kSpatioTemporal) {
    throw ParameterError("branch slots hold the wrong branch kinds");
  }
  spatial.validate();
  temporal.validate();
  spatiotemporal.validate();
  const int c = spatial.output_channels();
  if (temporal.output_channels() != c || spatiotemporal.output_channels() != c) {
    throw ParameterError(fmt::format("branch output widths differ (S {}, T {}, ST {}); STA needs one width", c,
                                     temporal.output_channels(), spatiotemporal.output_channels()));
  }
  sta().validate();
}

void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value, std::size_t line) {
  key = trim(key);
  value = trim(value);
  bool known = true;
  if (key == "height") {
    config.geometry.height = parse_number<int>(key, value, line);
  } else if (key == "width") {
    config.geometry.width = parse_number<int>(key, value, line);
  } else if (key == "tau") {
    config.geometry.tau = parse_number<double>(key, value, line);
  } else if (key == "segments") {
    config.segments = parse_number<int>(key, value, line);
  } else if (key == "samples") {
    config.samples = parse_number<int>(key, value, line);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "normalize_h_by_H") {
    config.normalize_h_by_H = parse_bool(key, value, line);
  } else if (key == "threads") {
    config.threads = parse_number<int>(key, value, line);
  } else if (key == "reduce") {
    if (value == "max") {
      config.reduce = nn::Reduce::kMax;
    } else if (value == "mean") {
      config.reduce = nn::Reduce::kMean;
    } else {
      throw ConfigError(line, fmt::format("'reduce' expects max or mean, got '{}'", value));
    }
  } else if (key == "weights") {
    config.weights = std::string(value);
  } else if (key == "patch_size") {
    const int p = parse_number<int>(key, value, line);
    for (auto* b : {&config.spatial, &config.temporal, &config.spatiotemporal}) {
      for (auto& s : b->encoder) s.patch_size = p;
      for (auto& s : b->decoder) s.patch_size = p;
    }
  } else if (key == "sta.rounds") {
    config.sta_rounds = parse_number<int>(key, value, line);
  } else if (key == "sta.fc_hidden") {
    config.sta_fc_hidden = parse_number<int>(key, value, line);
  } else if (key == "sta.mlp_ratio") {
    config.sta_mlp_ratio = parse_number<int>(key, value, line);
  } else {
    known = false;
    const auto dot = key.find('.');
    if (dot != std::string_view::npos) {
      const auto prefix = key.substr(0, dot);
      const auto field = key.substr(dot + 1);
      serial::BranchConfig* b = prefix == "s"    ? &config.spatial
                                : prefix == "t"  ? &config.temporal
                                : prefix == "st" ? &config.spatiotemporal
                                                 : nullptr;
      if (b) known = apply_branch_setting(*b, field, key, value, line);
    }
  }
  if (!known) throw ConfigError(line, fmt::format("unknown key '{}'", key));
  config.assigned.insert(std::string(key));
}

void apply_override(PipelineConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(0, fmt::format("override '{}' is not of the form key=value", assignment));
  }
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto hash = line.find('#');
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, fmt::format("expected 'key = value', got '{}'", line));
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    apply_setting(config, key, line.substr(eq + 1), line_no);
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_text(const PipelineConfig& c) {
  std::ostringstream out;
  out << "height = " << c.geometry.height << '\n';
  out << "width = " << c.geometry.width << '\n';
  out << "tau = " << fmt::format("{}", c.geometry.tau) << '\n';
  out << "segments = " << c.segments << '\n';
  out << "samples = " << c.samples << '\n';
  out << "seed = " << c.seed << '\n';
  out << "normalize_h_by_H = " << (c.normalize_h_by_H ? "true" : "false") << '\n';
  out << "threads = " << c.threads << '\n';
  out << "reduce = " << (c.reduce == nn::Reduce::kMax ? "max" : "mean") << '\n';
  if (!c.weights.empty()) out << "weights = " << c.weights << '\n';
  out << "sta.rounds = " << c.sta_rounds << '\n';
  out << "sta.fc_hidden = " << c.sta_fc_hidden << '\n';
  out << "sta.mlp_ratio = " << c.sta_mlp_ratio << '\n';
  write_branch(out, "s", c.spatial);
  write_branch(out, "t", c.temporal);
  write_branch(out, "st", c.spatiotemporal);
  return out.str();
}

}  // namespace omnievent
