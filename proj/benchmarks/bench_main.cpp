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

#include <benchmark/benchmark.h>

#include <vector>

#include "omnievent/event_model.hpp"
#include "omnievent/oracles.hpp"
#include "omnievent/serial.hpp"
#include "omnievent/sfc.hpp"
#include "omnievent/synthetic.hpp"

namespace {

using namespace omnievent;

void BM_EncodeHilbert3d(benchmark::State& state) {
  const sfc::CurveOrder order{sfc::CurveKind::kHilbert, 3, 10};
  const auto batch = synthetic::drifting_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const auto cells = serial::branch_cells(batch, serial::BranchKind::kSpatioTemporal, order.bits);
  for (auto _ : state) benchmark::DoNotOptimize(sfc::encode_all(cells, order));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeHilbert3d)->RangeMultiplier(2)->Range(1 << 11, 1 << 14);

void BM_EncodeZ3d(benchmark::State& state) {
  const sfc::CurveOrder order{sfc::CurveKind::kZ, 3, 10};
  const auto batch = synthetic::drifting_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const auto cells = serial::branch_cells(batch, serial::BranchKind::kSpatioTemporal, order.bits);
  for (auto _ : state) benchmark::DoNotOptimize(sfc::encode_all(cells, order));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeZ3d)->RangeMultiplier(2)->Range(1 << 11, 1 << 14);

void BM_SerializeST(benchmark::State& state) {
  const auto batch = synthetic::drifting_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const sfc::CurveOrder order{sfc::CurveKind::kHilbert, 3, 10};
  const auto branch = serial::BranchConfig::defaults(serial::BranchKind::kSpatioTemporal);
  for (auto _ : state) benchmark::DoNotOptimize(serial::serialize(batch, order, branch));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SerializeST)->RangeMultiplier(2)->Range(1 << 11, 1 << 14)->Complexity(benchmark::oNLogN);

void BM_GridPool(benchmark::State& state) {
  const auto batch = synthetic::drifting_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const sfc::CurveOrder order{sfc::CurveKind::kHilbert, 3, 10};
  const auto ser = serial::serialize(batch, order, serial::BranchConfig::defaults(serial::BranchKind::kSpatioTemporal));
  const serial::Matrix features = serial::Matrix::Random(static_cast<Eigen::Index>(batch.size()), 32);
  for (auto _ : state) benchmark::DoNotOptimize(serial::grid_pool(ser, features, 5));
}
BENCHMARK(BM_GridPool)->RangeMultiplier(2)->Range(1 << 11, 1 << 14);

void BM_KnnEuclidean3d(benchmark::State& state) {
  const auto batch = synthetic::drifting_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const auto points = oracles::points_of(batch);
  for (auto _ : state) benchmark::DoNotOptimize(oracles::knn(points, 512, oracles::Metric::kEuclidean3d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnEuclidean3d)->RangeMultiplier(2)->Range(1 << 11, 1 << 13)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

}  // namespace

BENCHMARK_MAIN();
