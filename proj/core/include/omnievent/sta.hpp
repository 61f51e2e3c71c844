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

#ifndef OMNIEVENT_STA_HPP
#define OMNIEVENT_STA_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "omnievent/nn/layers.hpp"

namespace omnievent::sta {

using nn::Matrix;
using nn::Var;

struct StaConfig {
  int channels = 64;  // C of every input branch
  int length = 4096;  // N, shared by all inputs
  int rounds = 4;     // mutual S <-> T rounds, parameters unshared
  int fc_hidden = 64; // width between the two FC maps applied to E
  int mlp_ratio = 4;  // final MLP hidden = mlp_ratio * 2C

  int out_channels() const noexcept { return 2 * channels; }
  /// Throws ParameterError on non-positive sizes or negative rounds.
  void validate() const;
};

/// Cross-attention of a point sequence x (keys, V1) against y (queries, V2),
/// both (N x C) with equal N:
///
///   Q = conv_q(y), K = conv_k(x), V1 = conv_v1(x), V2 = conv_v2(y)
///   E  = Q K^T / sqrt(C)                              (N x N)
///   E' = ReLU(fc2(ReLU(fc1(E))))                      fc maps act on the last axis
///   A  = row-softmax(E')
///   out = conv_out(A [V2 | V1])                       (N x 2C) -> (N x C)
///
/// Row i of the output is a convex combination, weighted by row i of A, of the
/// channel-concatenated value rows. conv_out has no bias, so zero values give
/// a zero output.
class CrossAttention {
 public:
  CrossAttention() = default;
  CrossAttention(int channels, int length, int fc_hidden, Rng& rng);

  /// Throws UnsupportedError when x and y differ in length and ShapeError when
  /// the length or channel count differs from construction.
  Var forward(const Var& x, const Var& y, Matrix* attention = nullptr) const;
  void collect(const std::string& prefix, nn::ParameterList& out) const;

  nn::Linear conv_q;
  nn::Linear conv_k;
  nn::Linear conv_v1;
  nn::Linear conv_v2;
  nn::Linear fc1;
  nn::Linear fc2;
  nn::Linear conv_out;
};

struct MutualRound {
  CrossAttention to_spatial;
  CrossAttention to_temporal;
};

/// Per round, simultaneously:
///   F_s' = F_s + CA_s(F_s, F_t),  F_t' = F_t + CA_t(F_t, F_s).
std::pair<Var, Var> mutual_rounds(const Var& f_s, const Var& f_t, std::span<const MutualRound> rounds);

/// G_s = CA(F_st, F_s4), G_t = CA(F_st, F_t4); MLP([G_s | G_t]) -> (N x 2C).
class StInteraction {
 public:
  StInteraction() = default;
  StInteraction(int channels, int length, int fc_hidden, int mlp_ratio, Rng& rng);

  Var forward(const Var& f_s4, const Var& f_t4, const Var& f_st) const;
  /// The channel concatenation fed to the MLP, for inspection.
  Var fused(const Var& f_s4, const Var& f_t4, const Var& f_st) const;
  Var mlp(const Var& x) const;
  void collect(const std::string& prefix, nn::ParameterList& out) const;

  CrossAttention with_spatial;
  CrossAttention with_temporal;
  nn::Linear mlp1;  // 2C -> mlp_ratio * 2C
  nn::Linear mlp2;  // -> 2C
};

/// The full fusion stack: mutual rounds followed by the interaction with the
/// joint branch.
class StaModule {
 public:
  StaModule() = default;
  StaModule(const StaConfig& config, Rng& rng);

  /// One batch element, each input (N x C). Returns (N x 2C).
  Var forward(const Var& f_s, const Var& f_t, const Var& f_st) const;
  /// B elements; returns B outputs of shape (N x 2C).
  std::vector<Var> forward(std::span<const Var> f_s, std::span<const Var> f_t, std::span<const Var> f_st) const;
  void collect(const std::string& prefix, nn::ParameterList& out) const;

  /// Zeroes every cross-attention output projection in the mutual rounds.
  void zero_round_outputs();

  StaConfig config;
  std::vector<MutualRound> rounds;
  StInteraction interaction;
};

}  // namespace omnievent::sta

#endif  // OMNIEVENT_STA_HPP
