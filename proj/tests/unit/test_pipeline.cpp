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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "omnievent/error.hpp"
#include "omnievent/nn/checkpoint.hpp"
#include "omnievent/pipeline.hpp"
#include "test_util.hpp"

namespace {

using namespace omnievent;

std::string small_config_text() {
  std::ifstream in(std::string(OMNIEVENT_FIXTURES) + "/small.conf");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig small_config() { return parse_config(small_config_text()); }

std::vector<Event> small_events(std::uint64_t seed = 1) { return testutil::random_events(400, 16, 16, 0.0, 1.0, seed); }

TEST(Pipeline, Shapes) {
  const PipelineConfig cfg = small_config();
  const Model model(cfg);
  const EventBatch batch = prepare_batch(small_events(), cfg);
  EXPECT_EQ(batch.size(), 64u);
  const auto f = model.features(batch);
  EXPECT_EQ(f.rows(), 64);
  EXPECT_EQ(f.cols(), 16);
  EXPECT_EQ(model.grid(batch).rows(), 256);
  const auto t = tensorize(small_events(), model);
  EXPECT_EQ(t.height, 16);
  EXPECT_EQ(t.width, 16);
  EXPECT_EQ(t.channels, 16 + ft::kStatChannels);
  EXPECT_EQ(t.data.size(), 16u * 16u * 20u);
  EXPECT_TRUE(std::all_of(t.data.begin(), t.data.end(), [](float v) { return std::isfinite(v); }));
}

TEST(Pipeline, StatisticalChannelsSeeEveryEvent) {
  const auto events = small_events();
  const auto t = tensorize(events, small_config());
  double total = 0.0;
  for (int h = 0; h < 16; ++h) {
    for (int w = 0; w < 16; ++w) total += t.at(h, w, 16) + t.at(h, w, 17);
  }
  EXPECT_EQ(total, static_cast<double>(events.size()));
}

TEST(Pipeline, DeterministicForFixedSeed) {
  const auto events = small_events();
  PipelineConfig cfg = small_config();
  const auto a = tensorize(events, cfg);
  const auto b = tensorize(events, cfg);
  EXPECT_EQ(omnx_bytes(a), omnx_bytes(b));
  cfg.seed = 7;
  EXPECT_NE(omnx_bytes(tensorize(events, cfg)), omnx_bytes(a));
}

TEST(Pipeline, ThreadCountDoesNotChangeOutput) {
  const auto events = small_events(3);
  PipelineConfig one = small_config();
  PipelineConfig three = one;
  three.threads = 3;
  EXPECT_EQ(omnx_bytes(tensorize(events, one)), omnx_bytes(tensorize(events, three)));
}

TEST(Pipeline, TensorizeRecordsMatchesEventPath) {
  const auto events = small_events(4);
  const auto records = records_from_events(events);
  const std::string text = small_config_text();
  const auto direct = tensorize(events_from_records(records), parse_config(text));
  EXPECT_EQ(omnx_bytes(tensorize_records(records, text)), omnx_bytes(direct));
}

TEST(Pipeline, TensorizeRecordsCallsAreIndependent) {
  const std::string text = small_config_text();
  const auto ra = records_from_events(small_events(5));
  const auto rb = records_from_events(small_events(6));
  const auto first = omnx_bytes(tensorize_records(ra, text));
  const auto other = omnx_bytes(tensorize_records(rb, text + "seed = 3\n"));
  EXPECT_NE(first, other);
  EXPECT_EQ(omnx_bytes(tensorize_records(ra, text)), first);
}

TEST(Pipeline, TensorizeRecordsErrors) {
  const std::vector<PackedEventRecord> none;
  EXPECT_THROW(tensorize_records(none, small_config_text()), ParameterError);
  const auto records = records_from_events(small_events());
  EXPECT_THROW(tensorize_records(records, "height = 16\nwidth\n"), ConfigError);
  EXPECT_THROW(tensorize_records(records, small_config_text() + "s.dec_channels = 4\n"), ParameterError);
}

TEST(Pipeline, EventsOutsideGeometryAreRejected) {
  auto events = small_events();
  events.push_back({0.5, 16, 0, 1});
  EXPECT_THROW(tensorize(events, small_config()), RangeError);
}

TEST(Pipeline, BatchSizeMustMatchModel) {
  PipelineConfig cfg = small_config();
  const Model model(cfg);
  cfg.samples = 32;
  EXPECT_THROW(model.features(prepare_batch(small_events(), cfg)), ShapeError);
}

TEST(Pipeline, TraceRecordsAllowedOrdersAndPooling) {
  const PipelineConfig cfg = small_config();
  const Model model(cfg);
  std::vector<BranchTrace> trace;
  model.features(prepare_batch(small_events(), cfg), &trace);
  ASSERT_EQ(trace.size(), 3u);
  for (const auto& bt : trace) {
    const auto& allowed = cfg.branch(bt.branch).orders;
    ASSERT_EQ(bt.levels.size(), 3u);  // two encoder levels, then one decoder level
    EXPECT_EQ(bt.levels[0].points, 64u);
    EXPECT_EQ(bt.levels[0].shift, 0);
    EXPECT_EQ(bt.levels[0].patches, 4u);
    EXPECT_EQ(bt.levels[1].shift, cfg.branch(bt.branch).pool_shifts[0]);
    EXPECT_LE(bt.levels[1].points, bt.levels[0].points);
    EXPECT_GE(bt.levels[1].points, 1u);
    EXPECT_EQ(bt.levels[2].order, bt.levels[0].order);
    EXPECT_EQ(bt.levels[2].points, bt.levels[0].points);
    for (const auto& l : bt.levels) EXPECT_NE(std::find(allowed.begin(), allowed.end(), l.order), allowed.end());
  }
}

TEST(Pipeline, ParametersAreNamedByModule) {
  const Model model(small_config());
  const auto params = model.parameters();
  for (const char* prefix : {"s.", "t.", "st.", "sta.", "ft."}) {
    EXPECT_TRUE(std::any_of(params.begin(), params.end(),
                            [&](const nn::NamedParameter& p) { return p.name.rfind(prefix, 0) == 0; }))
        << prefix;
  }
}

TEST(Pipeline, LoadsWeightsCheckpoint) {
  PipelineConfig cfg = small_config();
  const Model source(cfg);
  const auto params = source.parameters();
  params.back().var.mutable_value().array() += 0.5;
  const auto path = std::filesystem::temp_directory_path() / "omnievent_test_weights.omnt";
  nn::save_checkpoint(path, params);
  cfg.weights = path.string();
  const Model loaded(cfg);
  const auto got = loaded.parameters();
  ASSERT_EQ(got.size(), params.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].var.value(), params[i].var.value()) << got[i].name;
  std::filesystem::remove(path);
  cfg.weights = "/nonexistent/weights.omnt";
  EXPECT_THROW(Model{cfg}, IoError);
}

}  // namespace
