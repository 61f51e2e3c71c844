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

#include "omnievent/pipeline.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <map>
#include <sstream>

#include "omnievent/error.hpp"
#include "omnievent/nn/checkpoint.hpp"

namespace omnievent {

using nn::Var;

namespace {

std::vector<nn::EncoderBlock> make_blocks(const serial::StageConfig& stage, int mlp_ratio, Rng& rng) {
  std::vector<nn::EncoderBlock> blocks;
  for (int d = 0; d < stage.depth; ++d) blocks.emplace_back(stage.channels, stage.heads, mlp_ratio, rng);
  return blocks;
}

// Runs `blocks` on consecutive runs of `patch` points in curve order, then
// restores input order.
Var run_patches(const Var& x, std::span<const std::uint32_t> perm, int patch,
                std::span<const nn::EncoderBlock> blocks) {
  if (blocks.empty()) return x;
  const Var sorted = nn::gather_rows(x, perm);
  const auto n = static_cast<Eigen::Index>(perm.size());
  std::vector<Var> parts;
  for (Eigen::Index begin = 0; begin < n; begin += patch) {
    Var p = nn::slice_rows(sorted, begin, std::min<Eigen::Index>(patch, n - begin));
    for (const auto& block : blocks) p = block.forward(p);
    parts.push_back(std::move(p));
  }
  const Var merged = parts.size() == 1 ? parts.front() : nn::concat_rows(parts);
  std::vector<std::uint32_t> inverse(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inverse[perm[k]] = static_cast<std::uint32_t>(k);
  return nn::gather_rows(merged, inverse);
}

std::size_t patch_count(std::size_t n, int patch) { return (n + static_cast<std::size_t>(patch) - 1) / patch; }

}  // namespace

BranchNetwork::BranchNetwork(const serial::BranchConfig& cfg, Rng& rng) : config(cfg) {
  config.validate();
  const auto& enc = config.encoder;
  const auto& dec = config.decoder;
  embed = nn::Embedding(enc.front().channels, rng);
  for (std::size_t l = 0; l < enc.size(); ++l) {
    if (l > 0) down.emplace_back(enc[l - 1].channels, enc[l].channels, rng);
    encoder.push_back(make_blocks(enc[l], config.mlp_ratio, rng));
  }
  for (std::size_t l = 0; l < dec.size(); ++l) {
    const int deeper = l + 1 < dec.size() ? dec[l + 1].channels : enc.back().channels;
    up.emplace_back(deeper, dec[l].channels, rng);
    skip.emplace_back(enc[l].channels, dec[l].channels, rng);
    decoder.push_back(make_blocks(dec[l], config.mlp_ratio, rng));
  }
}

Var BranchNetwork::forward(const EventBatch& batch, std::uint64_t order_seed, BranchTrace* trace) const {
  if (batch.size() == 0) throw ParameterError("branch forward needs at least one point");
  const int dims = config.dims();
  const auto cells = serial::branch_cells(batch, config.branch, config.bits);
  std::map<sfc::CurveKind, std::vector<std::uint64_t>> base_codes;
  auto codes_for = [&](sfc::CurveKind kind) -> const std::vector<std::uint64_t>& {
    auto it = base_codes.find(kind);
    if (it == base_codes.end()) {
      it = base_codes.emplace(kind, sfc::encode_all(cells, sfc::CurveOrder{kind, dims, config.bits})).first;
    }
    return it->second;
  };

  const std::size_t levels = config.encoder.size();
  std::vector<std::vector<std::uint32_t>> origin(levels);  // level point -> input point
  std::vector<serial::SerializedBatch> serialized(levels);
  std::vector<serial::PoolMap> maps;  // maps[l]: level l -> level l + 1
  std::vector<Var> enc_out(levels);

  origin[0].resize(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) origin[0][i] = static_cast<std::uint32_t>(i);
  if (trace) {
    trace->branch = config.branch;
    trace->levels.clear();
  }

  Var x = embed.forward(batch);
  int shift = 0;
  for (std::size_t l = 0; l < levels; ++l) {
    if (l > 0) {
      shift += config.pool_shifts[l - 1];
      maps.push_back(serial::make_pool_map(serialized[l - 1], shift));
      const auto& map = maps.back();
      x = nn::segment_reduce(down[l - 1].forward(x), map.group_of, map.group_count(), nn::Reduce::kMax);
      origin[l].resize(map.group_count());
      for (std::size_t g = 0; g < map.group_count(); ++g) origin[l][g] = origin[l - 1][map.representative[g]];
    }
    const sfc::CurveOrder order{serial::select_order(static_cast<int>(l), config, order_seed).kind, dims,
                                config.bits};
    const auto& base = codes_for(order.kind);
    std::vector<std::uint64_t> codes(origin[l].size());
    for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = base[origin[l][i]];
    serialized[l] = serial::serialize_codes(std::move(codes), order, config.encoder[l].patch_size);
    x = run_patches(x, serialized[l].perm, config.encoder[l].patch_size, encoder[l]);
    enc_out[l] = x;
    if (trace) {
      trace->levels.push_back({order.kind, origin[l].size(), serialized[l].patches.size(), shift});
    }
  }

  for (std::size_t l = decoder.size(); l-- > 0;) {
    const Var lifted = nn::gather_rows(up[l].forward(x), maps[l].group_of);
    x = nn::add(lifted, skip[l].forward(enc_out[l]));
    x = run_patches(x, serialized[l].perm, config.decoder[l].patch_size, decoder[l]);
    if (trace) {
      trace->levels.push_back({serialized[l].order.kind, origin[l].size(),
                               patch_count(origin[l].size(), config.decoder[l].patch_size), 0});
    }
  }
  return x;
}

void BranchNetwork::collect(const std::string& prefix, nn::ParameterList& out) const {
  embed.collect(prefix + ".embed", out);
  for (std::size_t l = 0; l < encoder.size(); ++l) {
    const std::string stage = prefix + ".enc" + std::to_string(l);
    if (l > 0) down[l - 1].collect(stage + ".down", out);
    for (std::size_t b = 0; b < encoder[l].size(); ++b) encoder[l][b].collect(stage + ".block" + std::to_string(b), out);
  }
  for (std::size_t l = 0; l < decoder.size(); ++l) {
    const std::string stage = prefix + ".dec" + std::to_string(l);
    up[l].collect(stage + ".up", out);
    skip[l].collect(stage + ".skip", out);
    for (std::size_t b = 0; b < decoder[l].size(); ++b) decoder[l][b].collect(stage + ".block" + std::to_string(b), out);
  }
}

Model::Model(const PipelineConfig& cfg) : config(cfg) {
  config.validate();
  Rng rng(derive_seed(config.seed, kModelStream));
  spatial = BranchNetwork(config.spatial, rng);
  temporal = BranchNetwork(config.temporal, rng);
  spatiotemporal = BranchNetwork(config.spatiotemporal, rng);
  sta = sta::StaModule(config.sta(), rng);
  tensorizer = ft::Tensorizer(config.sta().out_channels(), rng);
  if (!config.weights.empty()) nn::load_checkpoint(config.weights, parameters());
}

Var Model::features(const EventBatch& batch, std::vector<BranchTrace>* trace) const {
  if (static_cast<int>(batch.size()) != config.samples) {
    throw ShapeError("model built for " + std::to_string(config.samples) + " points, batch has " +
                     std::to_string(batch.size()));
  }
  const std::uint64_t order_seed = derive_seed(config.seed, kOrderStream);
  const std::array<const BranchNetwork*, 3> branches{&spatial, &temporal, &spatiotemporal};
  std::array<Var, 3> out;
  std::array<BranchTrace, 3> traces;
  auto run = [&](std::size_t i) { out[i] = branches[i]->forward(batch, order_seed, trace ? &traces[i] : nullptr); };
  if (config.threads > 1) {
    const bool grad = nn::grad_enabled();
    std::vector<std::future<void>> jobs;
    for (std::size_t i = 1; i < branches.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i, grad] {
        if (!grad) {
          nn::NoGradGuard guard;
          run(i);
        } else {
          run(i);
        }
      }));
    }
    run(0);
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < branches.size(); ++i) run(i);
  }
  if (trace) trace->assign(traces.begin(), traces.end());
  return sta.forward(out[0], out[1], out[2]);
}

Var Model::grid(const EventBatch& batch) const {
  return tensorizer.forward(batch, features(batch), config.geometry, config.reduce);
}

nn::ParameterList Model::parameters() const {
  nn::ParameterList params;
  spatial.collect("s", params);
  temporal.collect("t", params);
  spatiotemporal.collect("st", params);
  sta.collect("sta", params);
  tensorizer.collect("ft", params);
  return params;
}

EventBatch prepare_batch(std::span<const Event> events, const PipelineConfig& config) {
  const auto fused = fuse(events, config.segments);
  SamplingOptions options;
  options.normalize_h_by_H = config.normalize_h_by_H;
  return sample_and_normalize(fused, config.samples, config.geometry, derive_seed(config.seed, kSampleStream),
                              config.segments, options);
}

ft::GridTensor tensorize(std::span<const Event> events, const Model& model) {
  for (const auto& e : events) {
    if (!model.config.geometry.contains(e.h, e.w)) throw RangeError("event outside the sensor geometry");
  }
  const EventBatch batch = prepare_batch(events, model.config);
  nn::NoGradGuard no_grad;
  const Var learned = model.grid(batch);
  return ft::assemble(learned.value(), ft::statistical_channels(events, model.config.geometry), model.config.geometry);
}

ft::GridTensor tensorize(std::span<const Event> events, const PipelineConfig& config) {
  return tensorize(events, Model(config));
}

ft::GridTensor tensorize_records(std::span<const PackedEventRecord> records, std::string_view config_text) {
  if (records.empty()) throw ParameterError("event buffer is empty");
  const PipelineConfig config = parse_config(config_text);
  const auto events = events_from_records(records);
  return tensorize(events, config);
}

std::vector<char> omnx_bytes(const ft::GridTensor& tensor) {
  std::ostringstream out(std::ios::binary);
  ft::write_omnx(out, tensor);
  const std::string s = out.str();
  return {s.begin(), s.end()};
}

}  // namespace omnievent
