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

#include "selfcheck.hpp"

#include <array>

#include <fmt/format.h>

#include "omnievent/nn/grad_check.hpp"
#include "omnievent/nn/layers.hpp"
#include "omnievent/sfc.hpp"
#include "omnievent/sta.hpp"

namespace omnievent::tools {

namespace {

using nn::Matrix;
using nn::Var;

constexpr double kGradTolerance = 1e-4;

CheckOutcome round_trip(sfc::CurveKind kind, int dims, int bits) {
  const sfc::CurveOrder order{kind, dims, bits};
  std::uint64_t bad = 0;
  for (std::uint64_t code = 0; code < order.code_space(); ++code) {
    if (sfc::encode(sfc::decode(code, order), order) != code) ++bad;
  }
  return {fmt::format("codec {} {}-D b={}", sfc::to_string(kind), dims, bits), bad == 0,
          fmt::format("{} codes, {} mismatches", order.code_space(), bad)};
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 2.0 * uniform_unit(rng) - 1.0;
  return m;
}

// Loss weights with a mean-style 1/rows scale.
Matrix loss_weights(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return random_matrix(rows, cols, rng) / static_cast<double>(rows);
}

CheckOutcome grad_outcome(const std::string& name, const nn::GradCheckResult& r) {
  return {name, r.max_rel_error < kGradTolerance,
          fmt::format("{} parameters, max relative error {:.3e} at {}[{}]", r.checked, r.max_rel_error,
                      r.worst_parameter, r.worst_index)};
}

}  // namespace

std::vector<CheckOutcome> codec_checks() {
  std::vector<CheckOutcome> out;
  out.push_back(round_trip(sfc::CurveKind::kHilbert, 2, 10));
  out.push_back(round_trip(sfc::CurveKind::kZ, 2, 10));
  for (auto kind : {sfc::CurveKind::kHilbert, sfc::CurveKind::kHilbertTrans, sfc::CurveKind::kZ,
                    sfc::CurveKind::kZTrans}) {
    out.push_back(round_trip(kind, 3, 6));
  }
  return out;
}

std::vector<CheckOutcome> gradient_checks(std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  Rng rng(seed);
  nn::GradCheckOptions options;
  options.seed = seed;

  {
    nn::EncoderBlock block(8, 2, 4, rng);
    const Var x(random_matrix(32, 8, rng));
    const Matrix w = loss_weights(32, 8, rng);
    nn::ParameterList params;
    block.collect("block", params);
    out.push_back(grad_outcome("grad encoder_block C=8 N=32",
                               nn::grad_check([&] { return nn::weighted_sum(block.forward(x), w); }, params, options)));
  }
  {
    constexpr int kC = 4;
    constexpr int kN = 8;
    std::vector<sta::MutualRound> rounds;
    for (int r = 0; r < 4; ++r) {
      rounds.push_back({sta::CrossAttention(kC, kN, kN, rng), sta::CrossAttention(kC, kN, kN, rng)});
    }
    sta::StInteraction interaction(kC, kN, kN, 4, rng);
    const Var fs(random_matrix(kN, kC, rng));
    const Var ft(random_matrix(kN, kC, rng));
    const Var fst(random_matrix(kN, kC, rng));
    const Matrix w = loss_weights(kN, 2 * kC, rng);
    nn::ParameterList params;
    for (std::size_t r = 0; r < rounds.size(); ++r) {
      rounds[r].to_spatial.collect("round" + std::to_string(r) + ".to_s", params);
      rounds[r].to_temporal.collect("round" + std::to_string(r) + ".to_t", params);
    }
    interaction.collect("interaction", params);
    auto loss = [&] {
      auto [s4, t4] = sta::mutual_rounds(fs, ft, rounds);
      return nn::weighted_sum(interaction.forward(s4, t4, fst), w);
    };
    out.push_back(grad_outcome("grad cross_attention+mutual_rounds+st_interaction C=4 N=8",
                               nn::grad_check(loss, params, options)));
  }
  {
    nn::Embedding embed(16, rng);
    const Var x(random_matrix(32, kInputFeatures, rng));
    const Matrix w = loss_weights(32, 16, rng);
    nn::ParameterList params;
    embed.collect("embed", params);
    out.push_back(grad_outcome("grad embed C=16",
                               nn::grad_check([&] { return nn::weighted_sum(embed.forward(x), w); }, params, options)));
  }
  return out;
}

}  // namespace omnievent::tools
