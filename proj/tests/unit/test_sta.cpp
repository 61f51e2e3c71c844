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

#include <gtest/gtest.h>

#include <array>

#include "omnievent/error.hpp"
#include "omnievent/nn/grad_check.hpp"
#include "omnievent/sta.hpp"
#include "test_util.hpp"

namespace {

using namespace omnievent;
using namespace omnievent::sta;
using testutil::params_of;
using testutil::random_matrix;

naive::CrossAttentionParams oracle_params(const CrossAttention& ca) {
  return {params_of(ca.conv_q), params_of(ca.conv_k), params_of(ca.conv_v1), params_of(ca.conv_v2),
          params_of(ca.fc1),    params_of(ca.fc2),    params_of(ca.conv_out)};
}

void randomize(const nn::ParameterList& params, Rng& rng) {
  for (const auto& p : params) p.var.mutable_value() = random_matrix(p.var.rows(), p.var.cols(), rng, 0.5);
}

CrossAttention random_cross_attention(int c, int n, int hidden, Rng& rng) {
  CrossAttention ca(c, n, hidden, rng);
  nn::ParameterList params;
  ca.collect("ca", params);
  randomize(params, rng);
  return ca;
}

TEST(CrossAttention, SinglePointHasUnitWeight) {
  Rng rng(1);
  const CrossAttention ca = random_cross_attention(4, 1, 3, rng);
  Matrix a;
  ca.forward(Var(random_matrix(1, 4, rng)), Var(random_matrix(1, 4, rng)), &a);
  EXPECT_EQ(a.rows(), 1);
  EXPECT_DOUBLE_EQ(a(0, 0), 1.0);
}

TEST(CrossAttention, ZeroValuesGiveZeroOutput) {
  Rng rng(2);
  CrossAttention ca(4, 8, 8, rng);
  ca.fc1.set_identity();
  ca.fc2.set_identity();
  ca.conv_v1.set_zero();
  ca.conv_v2.set_zero();
  const Matrix y = ca.forward(Var(random_matrix(8, 4, rng)), Var(random_matrix(8, 4, rng))).value();
  EXPECT_EQ(y, Matrix::Zero(8, 4));
}

TEST(CrossAttention, MatchesNaiveOracle) {
  Rng rng(3);
  const CrossAttention ca = random_cross_attention(4, 8, 6, rng);
  const Matrix x = random_matrix(8, 4, rng), y = random_matrix(8, 4, rng);
  Matrix a;
  const Matrix out = ca.forward(Var(x), Var(y), &a).value();
  naive::Grid want_a;
  const auto want = naive::cross_attention(naive::to_grid(x), naive::to_grid(y), oracle_params(ca), &want_a);
  EXPECT_LT(naive::max_abs_diff(want, out), 1e-12);
  EXPECT_LT(naive::max_abs_diff(want_a, a), 1e-12);
  for (Eigen::Index r = 0; r < a.rows(); ++r) EXPECT_NEAR(a.row(r).sum(), 1.0, 1e-12);
  EXPECT_FALSE(ca.conv_out.bias.defined());
}

TEST(CrossAttention, ShapeErrors) {
  Rng rng(4);
  CrossAttention ca(4, 8, 8, rng);
  EXPECT_THROW(ca.forward(Var(Matrix::Zero(8, 4)), Var(Matrix::Zero(6, 4))), UnsupportedError);
  EXPECT_THROW(ca.forward(Var(Matrix::Zero(6, 4)), Var(Matrix::Zero(6, 4))), ShapeError);
  EXPECT_THROW(ca.forward(Var(Matrix::Zero(8, 3)), Var(Matrix::Zero(8, 3))), ShapeError);
}

TEST(MutualRounds, ZeroOutputsAreIdentity) {
  Rng rng(5);
  StaModule sta({4, 8, 4, 8, 2}, rng);
  sta.zero_round_outputs();
  const Matrix s = random_matrix(8, 4, rng), t = random_matrix(8, 4, rng);
  const auto [s4, t4] = mutual_rounds(Var(s), Var(t), sta.rounds);
  EXPECT_EQ(s4.value(), s);
  EXPECT_EQ(t4.value(), t);
}

TEST(MutualRounds, NoRoundsPassThrough) {
  Rng rng(6);
  const Matrix s = random_matrix(8, 4, rng), t = random_matrix(8, 4, rng);
  const auto [s0, t0] = mutual_rounds(Var(s), Var(t), {});
  EXPECT_EQ(s0.value(), s);
  EXPECT_EQ(t0.value(), t);
  EXPECT_THROW(mutual_rounds(Var(s), Var(random_matrix(7, 4, rng)), {}), ShapeError);
}

TEST(MutualRounds, MatchesUnrolledOracle) {
  Rng rng(7);
  StaModule sta({4, 8, 4, 6, 2}, rng);
  nn::ParameterList params;
  sta.collect("sta", params);
  randomize(params, rng);
  const Matrix s = random_matrix(8, 4, rng), t = random_matrix(8, 4, rng);
  naive::Grid gs = naive::to_grid(s), gt = naive::to_grid(t);
  for (const auto& r : sta.rounds) {
    const auto ns = naive::add(gs, naive::cross_attention(gs, gt, oracle_params(r.to_spatial)));
    const auto nt = naive::add(gt, naive::cross_attention(gt, gs, oracle_params(r.to_temporal)));
    gs = ns;
    gt = nt;
  }
  const auto [s4, t4] = mutual_rounds(Var(s), Var(t), sta.rounds);
  EXPECT_LT(naive::max_abs_diff(gs, s4.value()), 1e-11);
  EXPECT_LT(naive::max_abs_diff(gt, t4.value()), 1e-11);
}

TEST(StInteraction, ZeroMlpGivesZero) {
  Rng rng(8);
  StInteraction st(4, 8, 8, 4, rng);
  st.mlp1.set_zero();
  st.mlp2.set_zero();
  const Var a(random_matrix(8, 4, rng)), b(random_matrix(8, 4, rng)), c(random_matrix(8, 4, rng));
  EXPECT_EQ(st.forward(a, b, c).value(), Matrix::Zero(8, 8));
}

TEST(StInteraction, FusedIsChannelConcatOfBothAttentions) {
  Rng rng(9);
  StInteraction st(4, 8, 8, 4, rng);
  const Var s(random_matrix(8, 4, rng)), t(random_matrix(8, 4, rng)), x(random_matrix(8, 4, rng));
  const Matrix fused = st.fused(s, t, x).value();
  ASSERT_EQ(fused.cols(), 8);
  EXPECT_EQ(fused.leftCols(4), st.with_spatial.forward(x, s).value());
  EXPECT_EQ(fused.rightCols(4), st.with_temporal.forward(x, t).value());

  const auto mlp = [&](const naive::Grid& g) {
    return params_of(st.mlp2)(naive::map(params_of(st.mlp1)(g), naive::relu));
  };
  EXPECT_LT(naive::max_abs_diff(mlp(naive::to_grid(fused)), st.forward(s, t, x).value()), 1e-12);
  EXPECT_THROW(st.forward(s, t, Var(random_matrix(8, 3, rng))), ShapeError);
}

TEST(StaModule, OutputShapeAndBatch) {
  Rng rng(10);
  const StaConfig cfg{4, 16, 4, 8, 2};
  StaModule sta(cfg, rng);
  EXPECT_EQ(sta.rounds.size(), 4u);
  std::vector<Var> s, t, st;
  for (int b = 0; b < 3; ++b) {
    s.emplace_back(random_matrix(16, 4, rng));
    t.emplace_back(random_matrix(16, 4, rng));
    st.emplace_back(random_matrix(16, 4, rng));
  }
  const auto out = sta.forward(s, t, st);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t b = 0; b < out.size(); ++b) {
    EXPECT_EQ(out[b].rows(), 16);
    EXPECT_EQ(out[b].cols(), cfg.out_channels());
    EXPECT_EQ(out[b].value(), sta.forward(s[b], t[b], st[b]).value());
  }
  st.pop_back();
  EXPECT_THROW(sta.forward(s, t, st), ShapeError);
}

TEST(StaModule, ConfigValidation) {
  Rng rng(11);
  EXPECT_THROW(StaModule({0, 8, 4, 8, 2}, rng), ParameterError);
  EXPECT_THROW(StaModule({4, 8, -1, 8, 2}, rng), ParameterError);
  EXPECT_NO_THROW(StaModule({4, 8, 0, 8, 2}, rng));
}

TEST(StaModule, GradCheckToySize) {
  Rng rng(12);
  StaModule sta({4, 8, 4, 8, 2}, rng);
  const Var s(random_matrix(8, 4, rng)), t(random_matrix(8, 4, rng)), st(random_matrix(8, 4, rng));
  const Matrix w = random_matrix(8, 8, rng) / 8.0;
  nn::ParameterList params;
  sta.collect("sta", params);
  const auto r = nn::grad_check([&] { return nn::weighted_sum(sta.forward(s, t, st), w); }, params);
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst_parameter << "[" << r.worst_index << "]";
}

}  // namespace
