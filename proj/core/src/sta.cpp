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

#include "omnievent/sta.hpp"

#include <array>
#include <cmath>

#include "omnievent/error.hpp"

namespace omnievent::sta {

void StaConfig::validate() const {
  if (channels < 1 || length < 1 || fc_hidden < 1 || mlp_ratio < 1) {
    throw ParameterError("STA sizes (channels, length, fc_hidden, mlp_ratio) must be positive");
  }
  if (rounds < 0) throw ParameterError("STA round count must be non-negative");
}

CrossAttention::CrossAttention(int channels, int length, int fc_hidden, Rng& rng)
    : conv_q(channels, channels, rng),
      conv_k(channels, channels, rng),
      conv_v1(channels, channels, rng),
      conv_v2(channels, channels, rng),
      fc1(length, fc_hidden, rng),
      fc2(fc_hidden, length, rng),
      conv_out(2 * channels, channels, rng, /*bias=*/false) {}

Var CrossAttention::forward(const Var& x, const Var& y, Matrix* attention) const {
  if (x.rows() != y.rows()) throw UnsupportedError("cross-attention requires equal sequence lengths");
  if (x.rows() != fc1.in_features()) {
    throw ShapeError("cross-attention built for length " + std::to_string(fc1.in_features()) + ", got " +
                     std::to_string(x.rows()));
  }
  if (x.cols() != conv_q.in_features() || y.cols() != conv_q.in_features()) {
    throw ShapeError("cross-attention channel count mismatch");
  }
  const double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(x.cols()));
  const Var q = conv_q.forward(y);
  const Var k = conv_k.forward(x);
  const Var e = scale(matmul_nt(q, k), inv_sqrt_c);
  const Var e2 = relu(fc2.forward(relu(fc1.forward(e))));
  const Var a = softmax_rows(e2);
  if (attention) *attention = a.value();
  const std::array<Var, 2> values{conv_v2.forward(y), conv_v1.forward(x)};
  return conv_out.forward(matmul(a, concat_cols(values)));
}

void CrossAttention::collect(const std::string& prefix, nn::ParameterList& out) const {
  conv_q.collect(prefix + ".q", out);
  conv_k.collect(prefix + ".k", out);
  conv_v1.collect(prefix + ".v1", out);
  conv_v2.collect(prefix + ".v2", out);
  fc1.collect(prefix + ".fc1", out);
  fc2.collect(prefix + ".fc2", out);
  conv_out.collect(prefix + ".out", out);
}

std::pair<Var, Var> mutual_rounds(const Var& f_s, const Var& f_t, std::span<const MutualRound> rounds) {
  if (f_s.rows() != f_t.rows() || f_s.cols() != f_t.cols()) {
    throw ShapeError("mutual attention inputs must have matching shapes");
  }
  Var s = f_s;
  Var t = f_t;
  for (const auto& round : rounds) {
    Var next_s = add(s, round.to_spatial.forward(s, t));
    Var next_t = add(t, round.to_temporal.forward(t, s));
    s = std::move(next_s);
    t = std::move(next_t);
  }
  return {s, t};
}

StInteraction::StInteraction(int channels, int length, int fc_hidden, int mlp_ratio, Rng& rng)
    : with_spatial(channels, length, fc_hidden, rng),
      with_temporal(channels, length, fc_hidden, rng),
      mlp1(2 * channels, 2 * channels * mlp_ratio, rng),
      mlp2(2 * channels * mlp_ratio, 2 * channels, rng) {}

Var StInteraction::fused(const Var& f_s4, const Var& f_t4, const Var& f_st) const {
  if (f_s4.rows() != f_st.rows() || f_t4.rows() != f_st.rows() || f_s4.cols() != f_st.cols() ||
      f_t4.cols() != f_st.cols()) {
    throw ShapeError("interaction inputs must share one shape");
  }
  const std::array<Var, 2> parts{with_spatial.forward(f_st, f_s4), with_temporal.forward(f_st, f_t4)};
  return concat_cols(parts);
}

Var StInteraction::mlp(const Var& x) const { return mlp2.forward(relu(mlp1.forward(x))); }

Var StInteraction::forward(const Var& f_s4, const Var& f_t4, const Var& f_st) const {
  return mlp(fused(f_s4, f_t4, f_st));
}

void StInteraction::collect(const std::string& prefix, nn::ParameterList& out) const {
  with_spatial.collect(prefix + ".with_s", out);
  with_temporal.collect(prefix + ".with_t", out);
  mlp1.collect(prefix + ".mlp1", out);
  mlp2.collect(prefix + ".mlp2", out);
}

StaModule::StaModule(const StaConfig& cfg, Rng& rng) : config(cfg) {
  config.validate();
  for (int r = 0; r < config.rounds; ++r) {
    MutualRound round;
    round.to_spatial = CrossAttention(config.channels, config.length, config.fc_hidden, rng);
    round.to_temporal = CrossAttention(config.channels, config.length, config.fc_hidden, rng);
    rounds.push_back(std::move(round));
  }
  interaction = StInteraction(config.channels, config.length, config.fc_hidden, config.mlp_ratio, rng);
}

Var StaModule::forward(const Var& f_s, const Var& f_t, const Var& f_st) const {
  auto [s4, t4] = mutual_rounds(f_s, f_t, rounds);
  return interaction.forward(s4, t4, f_st);
}

std::vector<Var> StaModule::forward(std::span<const Var> f_s, std::span<const Var> f_t,
                                    std::span<const Var> f_st) const {
  if (f_s.size() != f_t.size() || f_s.size() != f_st.size()) throw ShapeError("STA batch sizes differ");
  std::vector<Var> out;
  out.reserve(f_s.size());
  for (std::size_t b = 0; b < f_s.size(); ++b) out.push_back(forward(f_s[b], f_t[b], f_st[b]));
  return out;
}

void StaModule::collect(const std::string& prefix, nn::ParameterList& out) const {
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    rounds[r].to_spatial.collect(prefix + ".round" + std::to_string(r) + ".to_s", out);
    rounds[r].to_temporal.collect(prefix + ".round" + std::to_string(r) + ".to_t", out);
  }
  interaction.collect(prefix + ".interaction", out);
}

void StaModule::zero_round_outputs() {
  for (auto& r : rounds) {
    r.to_spatial.conv_out.set_zero();
    r.to_temporal.conv_out.set_zero();
  }
}

}  // namespace omnievent::sta
