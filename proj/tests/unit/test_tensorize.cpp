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

#include <cmath>
#include <cstring>
#include <sstream>

#include "omnievent/error.hpp"
#include "omnievent/tensorize.hpp"
#include "test_util.hpp"

namespace {

using namespace omnievent;
using namespace omnievent::ft;
using testutil::random_matrix;

EventBatch batch_at(const std::vector<std::pair<int, int>>& pixels, const CameraGeometry& g) {
  EventBatch b;
  b.geometry = g;
  for (const auto& [h, w] : pixels) {
    NormalizedEvent e;
    e.h = h;
    e.w = w;
    b.events.push_back(e);
  }
  return b;
}

TEST(Scatter, SinglePointLandsOnItsPixel) {
  const CameraGeometry g{4, 5, 0.2};
  const auto batch = batch_at({{2, 3}}, g);
  Matrix f(1, 3);
  f << 1.5, -2.0, 0.25;
  const Matrix grid = scatter(batch, Var(f), g).value();
  ASSERT_EQ(grid.rows(), 20);
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    if (r == 2 * 5 + 3) {
      EXPECT_EQ(grid.row(r), f);
    } else {
      EXPECT_EQ(grid.row(r), Matrix::Zero(1, 3));
    }
  }
}

TEST(Scatter, MaxOnCollision) {
  const CameraGeometry g{3, 3, 0.2};
  const auto batch = batch_at({{1, 1}, {1, 1}, {0, 2}}, g);
  Matrix f(3, 1);
  f << 2.0, 5.0, -1.0;
  const Matrix grid = scatter(batch, Var(f), g).value();
  EXPECT_EQ(grid(4, 0), 5.0);
  EXPECT_EQ(grid(2, 0), -1.0);
  EXPECT_EQ(scatter(batch, Var(f), g, Reduce::kMean).value()(4, 0), 3.5);
}

TEST(Scatter, MatchesHashMapOracle) {
  const CameraGeometry g{16, 12, 0.2};
  Rng rng(1);
  std::vector<std::pair<int, int>> pixels;
  for (int i = 0; i < 500; ++i) {
    pixels.emplace_back(static_cast<int>(uniform_index(rng, 16)), static_cast<int>(uniform_index(rng, 12)));
  }
  const auto batch = batch_at(pixels, g);
  const Matrix f = random_matrix(500, 6, rng);
  EXPECT_EQ(naive::max_abs_diff(naive::scatter(pixels, naive::to_grid(f), 16, 12, true), scatter(batch, Var(f), g).value()),
            0.0);
  EXPECT_LT(naive::max_abs_diff(naive::scatter(pixels, naive::to_grid(f), 16, 12, false),
                                scatter(batch, Var(f), g, Reduce::kMean).value()),
            1e-12);
}

TEST(Scatter, MaxIsOrderAndDuplicationInvariant) {
  const CameraGeometry g{8, 8, 0.2};
  Rng rng(2);
  std::vector<std::pair<int, int>> pixels;
  for (int i = 0; i < 64; ++i) pixels.emplace_back(static_cast<int>(uniform_index(rng, 8)), static_cast<int>(uniform_index(rng, 8)));
  const Matrix f = random_matrix(64, 4, rng);
  const Matrix base = scatter(batch_at(pixels, g), Var(f), g).value();

  std::vector<std::uint32_t> perm(64);
  for (std::uint32_t i = 0; i < 64; ++i) perm[i] = (i * 13 + 7) % 64;
  std::vector<std::pair<int, int>> shuffled;
  for (auto i : perm) shuffled.push_back(pixels[i]);
  EXPECT_EQ(scatter(batch_at(shuffled, g), nn::gather_rows(Var(f), perm), g).value(), base);

  auto doubled = pixels;
  doubled.insert(doubled.end(), pixels.begin(), pixels.end());
  const std::array<Var, 2> parts{Var(f), Var(f)};
  EXPECT_EQ(scatter(batch_at(doubled, g), nn::concat_rows(parts), g).value(), base);
}

TEST(Scatter, Errors) {
  const CameraGeometry g{4, 4, 0.2};
  EXPECT_THROW(scatter(batch_at({{4, 0}}, g), Var(Matrix::Zero(1, 2)), g), RangeError);
  EXPECT_THROW(scatter(batch_at({{0, 0}}, g), Var(Matrix::Zero(2, 2)), g), ShapeError);
}

TEST(StatisticalChannels, EmptyStreamIsZero) {
  const CameraGeometry g{3, 4, 0.2};
  const Matrix s = statistical_channels({}, g);
  EXPECT_EQ(s, Matrix::Zero(12, kStatChannels));
}

TEST(StatisticalChannels, ThreePositiveEventsOnOnePixel) {
  const CameraGeometry g{2, 2, 0.2};
  const std::vector<Event> events{{0.0, 1, 1, 1}, {0.5, 1, 1, 1}, {1.0, 1, 1, 1}, {0.25, 0, 0, -1}};
  const Matrix s = statistical_channels(events, g);
  EXPECT_EQ(s(3, 0), 3.0);
  EXPECT_EQ(s(3, 1), 0.0);
  EXPECT_EQ(s(3, 2), 1.0);
  EXPECT_EQ(s(3, 3), 0.0);
  EXPECT_EQ(s(0, 1), 1.0);
  EXPECT_EQ(s(0, 3), 0.25);
}

TEST(StatisticalChannels, MatchesOracleAndCountsSum) {
  const CameraGeometry g{20, 30, 0.2};
  const auto events = testutil::random_events(3000, 20, 30, 1.0, 4.0, 3);
  std::vector<naive::RawEvent> raw;
  for (const auto& e : events) raw.push_back({e.t, e.h, e.w, e.p});
  const Matrix s = statistical_channels(events, g);
  EXPECT_LT(naive::max_abs_diff(naive::stat_channels(raw, 20, 30), s), 1e-12);
  EXPECT_EQ(s.col(0).sum() + s.col(1).sum(), 3000.0);
  EXPECT_LE(s.rightCols(2).maxCoeff(), 1.0);
  EXPECT_GE(s.rightCols(2).minCoeff(), 0.0);
  EXPECT_THROW(statistical_channels(std::vector<Event>{{0.0, 20, 0, 1}}, g), RangeError);
}

TEST(Tensorizer, StartsAsIdentityPreMap) {
  const CameraGeometry g{4, 4, 0.2};
  Rng rng(4);
  Tensorizer t(3, rng);
  const auto batch = batch_at({{0, 0}, {3, 3}}, g);
  const Matrix f = random_matrix(2, 3, rng);
  EXPECT_EQ(t.forward(batch, Var(f), g).value(), scatter(batch, Var(f), g).value());
}

TEST(Assemble, LayoutAndNames) {
  const CameraGeometry g{2, 3, 0.2};
  Rng rng(5);
  const Matrix learned = random_matrix(6, 2, rng);
  const Matrix stats = random_matrix(6, kStatChannels, rng);
  const GridTensor t = assemble(learned, stats, g);
  EXPECT_EQ(t.height, 2);
  EXPECT_EQ(t.width, 3);
  EXPECT_EQ(t.channels, 6);
  ASSERT_EQ(t.channel_names.size(), 6u);
  EXPECT_EQ(t.channel_names[0], "sta0");
  EXPECT_EQ(t.channel_names[2], "count_pos");
  EXPECT_EQ(t.channel_names[5], "latest_neg");
  for (int h = 0; h < 2; ++h) {
    for (int w = 0; w < 3; ++w) {
      const int r = h * 3 + w;
      EXPECT_EQ(t.at(h, w, 1), static_cast<float>(learned(r, 1)));
      EXPECT_EQ(t.at(h, w, 4), static_cast<float>(stats(r, 2)));
    }
  }
  EXPECT_THROW(assemble(learned.topRows(5), stats, g), ShapeError);
}

TEST(Omnx, HeaderBytesAndRoundTrip) {
  GridTensor t;
  t.height = 2;
  t.width = 1;
  t.channels = 3;
  t.data = {1.0f, -2.0f, 0.5f, 3.0f, 4.0f, std::nextafter(1.0f, 2.0f)};
  std::stringstream ss;
  write_omnx(ss, t);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4u + 2u + 12u + 24u);
  EXPECT_EQ(bytes.substr(0, 4), "OMNX");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 3);
  std::uint32_t dims[3];
  std::memcpy(dims, bytes.data() + 6, 12);
  EXPECT_EQ(dims[0], 2u);
  EXPECT_EQ(dims[1], 1u);
  EXPECT_EQ(dims[2], 3u);
  float first;
  std::memcpy(&first, bytes.data() + 18, 4);
  EXPECT_EQ(first, 1.0f);

  const RawTensor back = read_omnx(ss);
  EXPECT_EQ(back.dims, (std::vector<std::uint32_t>{2, 1, 3}));
  EXPECT_EQ(back.data, t.data);
}

TEST(Omnx, MalformedInputIsIoError) {
  std::stringstream bad("OMNY");
  EXPECT_THROW(read_omnx(bad), IoError);
  std::stringstream truncated(std::string("OMNX\x01\x03\x02\x00", 8));
  EXPECT_THROW(read_omnx(truncated), IoError);
  EXPECT_THROW(load_omnx("/nonexistent/tensor.omnx"), IoError);
}

TEST(Omnx, ChannelCsv) {
  GridTensor t;
  t.height = 2;
  t.width = 2;
  t.channels = 2;
  t.data = {1, 10, 2, 20, 3, 30, 4, 40};
  std::ostringstream out;
  write_channel_csv(out, t, 1);
  EXPECT_EQ(out.str(), "10,20\n30,40\n");
  EXPECT_THROW(write_channel_csv(out, t, 2), RangeError);
}

}  // namespace
