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

#ifndef OMNIEVENT_NN_LAYERS_HPP
#define OMNIEVENT_NN_LAYERS_HPP

#include <string>
#include <vector>

#include "omnievent/event_model.hpp"
#include "omnievent/nn/tensor.hpp"
#include "omnievent/random.hpp"

namespace omnievent::nn {

struct NamedParameter {
  std::string name;
  Var var;
};
using ParameterList = std::vector<NamedParameter>;

/// uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)), shape fan_in x fan_out.
Matrix glorot_uniform(int fan_in, int fan_out, Rng& rng);

/// Total scalar count of a parameter list.
std::size_t parameter_count(const ParameterList& params);

/// y = x W + b with W stored (in x out). Also serves as a width-1 convolution
/// over a point sequence.
class Linear {
 public:
  Linear() = default;
  Linear(int in_features, int out_features, Rng& rng, bool bias = true);

  Var forward(const Var& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  /// Sets W to the identity (square layers only) and b to zero.
  void set_identity();
  void set_zero();

  int in_features() const noexcept { return static_cast<int>(weight.rows()); }
  int out_features() const noexcept { return static_cast<int>(weight.cols()); }

  Var weight;
  Var bias;  // undefined when built without bias
};

class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(int channels, double eps = 1e-5);

  Var forward(const Var& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  Var gamma;
  Var beta;
  double eps = 1e-5;
};

/// Multi-head scaled dot-product self-attention over the rows of one patch.
class SelfAttention {
 public:
  SelfAttention() = default;
  SelfAttention(int channels, int heads, Rng& rng);

  /// When `weights` is given it receives one (rows x rows) probability matrix per head.
  Var forward(const Var& x, std::vector<Matrix>* weights = nullptr) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  int heads = 1;
  Linear qkv;   // C -> 3C, columns [Q | K | V]
  Linear proj;  // C -> C
};

class Mlp {
 public:
  Mlp() = default;
  Mlp(int channels, int hidden, Rng& rng);

  Var forward(const Var& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  Linear fc1;
  Linear fc2;
};

/// Pre-norm transformer block applied to one patch:
///   x = x + Attn(LN1(x));  x = x + MLP(LN2(x)).
/// No positional encoding, so the block is permutation-equivariant over rows.
class EncoderBlock {
 public:
  EncoderBlock() = default;
  EncoderBlock(int channels, int heads, int mlp_ratio, Rng& rng);

  /// Throws NumericError on non-finite input.
  Var forward(const Var& patch, std::vector<Matrix>* attention = nullptr) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  /// Zeroes both output projections, which turns the block into the identity.
  void zero_residual_branches();

  LayerNorm norm1;
  SelfAttention attn;
  LayerNorm norm2;
  Mlp mlp;
};

/// Per-point linear map from (x1, x2, x3, p_acc, c) to C0 channels.
class Embedding {
 public:
  Embedding() = default;
  Embedding(int channels, Rng& rng);

  Var forward(const EventBatch& batch) const;
  Var forward(const Var& features) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  Linear linear;
};

}  // namespace omnievent::nn

#endif  // OMNIEVENT_NN_LAYERS_HPP
