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

#include "omnievent/nn/layers.hpp"

#include <cmath>

#include "omnievent/error.hpp"

namespace omnievent::nn {

Matrix glorot_uniform(int fan_in, int fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = (2.0 * uniform_unit(rng) - 1.0) * a;
  return w;
}

std::size_t parameter_count(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += static_cast<std::size_t>(p.var.value().size());
  return n;
}

Linear::Linear(int in_features, int out_features, Rng& rng, bool bias)
    : weight(glorot_uniform(in_features, out_features, rng), true) {
  if (bias) this->bias = Var(Matrix::Zero(1, out_features), true);
}

Var Linear::forward(const Var& x) const {
  Var y = matmul(x, weight);
  return bias.defined() ? add_row(y, bias) : y;
}

void Linear::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weight});
  if (bias.defined()) out.push_back({prefix + ".bias", bias});
}

void Linear::set_identity() {
  if (weight.rows() != weight.cols()) throw ShapeError("set_identity needs a square linear layer");
  weight.mutable_value().setIdentity();
  if (bias.defined()) bias.mutable_value().setZero();
}

void Linear::set_zero() {
  weight.mutable_value().setZero();
  if (bias.defined()) bias.mutable_value().setZero();
}

LayerNorm::LayerNorm(int channels, double eps)
    : gamma(Matrix::Ones(1, channels), true), beta(Matrix::Zero(1, channels), true), eps(eps) {}

Var LayerNorm::forward(const Var& x) const { return layer_norm(x, gamma, beta, eps); }

void LayerNorm::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".gamma", gamma});
  out.push_back({prefix + ".beta", beta});
}

SelfAttention::SelfAttention(int channels, int heads, Rng& rng)
    : heads(heads), qkv(channels, 3 * channels, rng), proj(channels, channels, rng) {
  if (heads < 1 || channels % heads != 0) throw ParameterError("head count must divide the channel count");
}

Var SelfAttention::forward(const Var& x, std::vector<Matrix>* weights) const {
  const Eigen::Index c = x.cols();
  const Eigen::Index d = c / heads;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  const Var qkv_out = qkv.forward(x);
  std::vector<Var> outputs;
  outputs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    const Var q = slice_cols(qkv_out, h * d, d);
    const Var k = slice_cols(qkv_out, c + h * d, d);
    const Var v = slice_cols(qkv_out, 2 * c + h * d, d);
    const Var a = softmax_rows(scale(matmul_nt(q, k), inv_sqrt_d));
    if (weights) weights->push_back(a.value());
    outputs.push_back(matmul(a, v));
  }
  return proj.forward(heads == 1 ? outputs.front() : concat_cols(outputs));
}

void SelfAttention::collect(const std::string& prefix, ParameterList& out) const {
  qkv.collect(prefix + ".qkv", out);
  proj.collect(prefix + ".proj", out);
}

Mlp::Mlp(int channels, int hidden, Rng& rng) : fc1(channels, hidden, rng), fc2(hidden, channels, rng) {}

Var Mlp::forward(const Var& x) const { return fc2.forward(gelu(fc1.forward(x))); }

void Mlp::collect(const std::string& prefix, ParameterList& out) const {
  fc1.collect(prefix + ".fc1", out);
  fc2.collect(prefix + ".fc2", out);
}

EncoderBlock::EncoderBlock(int channels, int heads, int mlp_ratio, Rng& rng)
    : norm1(channels), attn(channels, heads, rng), norm2(channels), mlp(channels, channels * mlp_ratio, rng) {}

Var EncoderBlock::forward(const Var& patch, std::vector<Matrix>* attention) const {
  if (patch.rows() < 1) throw ShapeError("encoder block needs a non-empty patch");
  require_finite(patch.value(), "encoder block input");
  const Var x = add(patch, attn.forward(norm1.forward(patch), attention));
  return add(x, mlp.forward(norm2.forward(x)));
}

void EncoderBlock::collect(const std::string& prefix, ParameterList& out) const {
  norm1.collect(prefix + ".norm1", out);
  attn.collect(prefix + ".attn", out);
  norm2.collect(prefix + ".norm2", out);
  mlp.collect(prefix + ".mlp", out);
}

void EncoderBlock::zero_residual_branches() {
  attn.proj.set_zero();
  mlp.fc2.set_zero();
}

Embedding::Embedding(int channels, Rng& rng) : linear(kInputFeatures, channels, rng) {}

Var Embedding::forward(const EventBatch& batch) const { return forward(Var(batch.features())); }

Var Embedding::forward(const Var& features) const {
  if (features.cols() != kInputFeatures) throw ShapeError("embedding expects 5 input features per point");
  return linear.forward(features);
}

void Embedding::collect(const std::string& prefix, ParameterList& out) const { linear.collect(prefix, out); }

}  // namespace omnievent::nn
