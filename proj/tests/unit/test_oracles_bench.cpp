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

#include <algorithm>
#include <sstream>

#include "omnievent/bench.hpp"
#include "omnievent/error.hpp"
#include "omnievent/oracles.hpp"
#include "omnievent/synthetic.hpp"
#include "test_util.hpp"

namespace {

using namespace omnievent;
using oracles::Metric;
using oracles::Point3;

TEST(Knn, CollinearPoints) {
  std::vector<Point3> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({static_cast<double>(i * i), 0.0, 0.0});
  const auto nn = oracles::knn(pts, 2, Metric::kEuclidean3d);
  EXPECT_EQ(nn[0], (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(nn[3], (std::vector<std::uint32_t>{2, 4}));
  EXPECT_EQ(nn[5], (std::vector<std::uint32_t>{4, 3}));
}

TEST(Knn, MetricsSelectAxes) {
  const std::vector<Point3> pts{{0, 0, 0}, {1, 0, 5}, {3, 0, 0.1}};
  EXPECT_EQ(oracles::knn(pts, 1, Metric::kSpatial)[0], (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(oracles::knn(pts, 1, Metric::kTemporal)[0], (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(oracles::knn(pts, 1, Metric::kEuclidean3d)[0], (std::vector<std::uint32_t>{2}));
}

TEST(Knn, DuplicatesBreakTiesByIndexAndExcludeSelf) {
  const std::vector<Point3> pts{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {2, 2, 2}};
  const auto nn = oracles::knn(pts, 2, Metric::kEuclidean3d);
  EXPECT_EQ(nn[1], (std::vector<std::uint32_t>{0, 2}));
  EXPECT_EQ(nn[3], (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(oracles::knn(pts, 4, Metric::kSpatial)[0].size(), 3u);
  EXPECT_THROW(oracles::knn(pts, 5, Metric::kSpatial), ParameterError);
}

TEST(Knn, MatchesIndependentOracle) {
  const EventBatch batch = synthetic::drifting_clusters(1000, 7);
  const auto pts = oracles::points_of(batch);
  const auto got = oracles::knn(pts, 16, Metric::kEuclidean3d);
  EXPECT_EQ(got, naive::knn(pts, 16, 2));
  EXPECT_EQ(oracles::knn(pts, 16, Metric::kSpatial), naive::knn(pts, 16, 0));
}

TEST(Spread, ZeroForSingletonGroups) {
  const std::vector<Point3> pts{{0, 0, 0}, {3, 4, 1}};
  const std::vector<std::vector<std::uint32_t>> singletons{{0}, {1}};
  const auto s = bench::group_spread(pts, singletons);
  EXPECT_EQ(s.spatial, 0.0);
  EXPECT_EQ(s.temporal, 0.0);
  const std::vector<std::vector<std::uint32_t>> pair{{0, 1}};
  const auto p = bench::group_spread(pts, pair);
  EXPECT_DOUBLE_EQ(p.spatial, 2.5);
  EXPECT_DOUBLE_EQ(p.temporal, 0.5);
}

TEST(Bench, PatchCountAndReport) {
  const std::vector<std::size_t> sizes{1024, 2048};
  const std::vector<std::uint64_t> seeds{1};
  bench::BenchOptions opt;
  opt.repeats = 1;
  opt.min_serialize_ms = 1.0;
  const auto report = bench::bench_patch_vs_knn(sizes, 16, 512, seeds, opt);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].n, 1024u);
  EXPECT_EQ(report.rows[0].patches, 2u);
  EXPECT_EQ(report.rows[1].patches, 4u);
  for (const auto& r : report.rows) {
    EXPECT_GT(r.serialize_ms, 0.0);
    EXPECT_GT(r.knn_ms, 0.0);
    EXPECT_GT(r.knn_bytes, 0u);
    EXPECT_GT(r.patch_spatial_spread, 0.0);
  }
  EXPECT_GT(report.rows[1].knn_ms, report.rows[0].knn_ms);
  std::ostringstream csv;
  report.write_csv(csv);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Bench, PatchSizeSweep) {
  const auto sizes = bench::default_patch_sizes();
  EXPECT_EQ(sizes, (std::vector<int>{16, 32, 64, 128, 256, 512, 1024}));
  const auto report = bench::patch_size_sweep(2048, sizes, 3);
  ASSERT_EQ(report.rows.size(), 7u);
  EXPECT_EQ(report.rows.front().patches, 128u);
  EXPECT_EQ(report.rows.back().patches, 2u);
  // Larger patches cover more space.
  EXPECT_LT(report.rows.front().patch_spatial_spread, report.rows.back().patch_spatial_spread);
}

}  // namespace
