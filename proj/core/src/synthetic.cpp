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

#include "omnievent/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "omnievent/error.hpp"
#include "omnievent/random.hpp"

namespace omnievent::synthetic {

namespace {

double normal(Rng& rng) {
  const double u1 = 1.0 - uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

FrameSequence ramp_frames(const CameraGeometry& geometry) {
  if (geometry.height < 2 || geometry.width < 3) throw ParameterError("ramp fixture needs at least a 2 x 3 sensor");
  FrameSequence seq;
  for (int i = 0; i < 3; ++i) {
    LogFrame f = LogFrame::Zero(geometry.height, geometry.width);
    f(1, 2) = 1.5 * geometry.tau * i;
    seq.frames.push_back(std::move(f));
    seq.timestamps.push_back(0.5 * i);
  }
  return seq;
}

FrameSequence moving_blob(const CameraGeometry& geometry, int direction, int frames, double duration,
                          double sigma_px, double contrast, double row_fraction) {
  if (frames < 2) throw ParameterError("moving_blob needs at least two frames");
  FrameSequence seq;
  const double row = row_fraction * (geometry.height - 1);
  for (int i = 0; i < frames; ++i) {
    const double s = static_cast<double>(i) / (frames - 1);
    const double progress = direction > 0 ? s : 1.0 - s;
    const double col = -2.0 * sigma_px + progress * (geometry.width - 1 + 4.0 * sigma_px);
    LogFrame f(geometry.height, geometry.width);
    for (int h = 0; h < geometry.height; ++h) {
      for (int w = 0; w < geometry.width; ++w) {
        const double d2 = (h - row) * (h - row) + (w - col) * (w - col);
        f(h, w) = contrast * std::exp(-d2 / (2.0 * sigma_px * sigma_px));
      }
    }
    seq.frames.push_back(std::move(f));
    seq.timestamps.push_back(duration * s);
  }
  return seq;
}

std::vector<Event> motion_events(const CameraGeometry& geometry, int direction, std::size_t count,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const double row_fraction = 0.3 + 0.4 * uniform_unit(rng);
  const double duration = 0.05 + 0.02 * uniform_unit(rng);
  std::vector<Event> events;
  for (int frames = 24; events.size() < count; frames *= 2) {
    const auto seq = moving_blob(geometry, direction, frames, duration, 2.5, 2.0, row_fraction);
    events = synth_events(seq.frames, seq.timestamps, geometry);
    if (frames > 4096) throw ParameterError("motion_events cannot reach the requested event count");
  }
  // Uniform subset of `count` events, kept in time order.
  std::vector<std::size_t> idx(events.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<Event> out;
  out.reserve(count);
  for (auto i : idx) out.push_back(events[i]);
  return out;
}

std::vector<Event> uniform_events(const CameraGeometry& geometry, std::size_t count, double duration,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Event> events;
  events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Event e;
    e.t = duration * uniform_unit(rng);
    e.h = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(geometry.height)));
    e.w = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(geometry.width)));
    e.p = uniform_index(rng, 2) == 0 ? 1 : -1;
    events.push_back(e);
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return events;
}

EventBatch drifting_clusters(std::size_t count, std::uint64_t seed, int clusters, double sigma) {
  Rng rng(seed);
  struct Cluster {
    double x1, x2, v1, v2;
  };
  std::vector<Cluster> cs;
  for (int c = 0; c < clusters; ++c) {
    cs.push_back({0.15 + 0.7 * uniform_unit(rng), 0.15 + 0.7 * uniform_unit(rng), 0.2 * (uniform_unit(rng) - 0.5),
                  0.2 * (uniform_unit(rng) - 0.5)});
  }
  EventBatch batch;
  batch.geometry = CameraGeometry{1024, 1024, 0.2};
  batch.samples = static_cast<int>(count);
  batch.events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Cluster& c = cs[uniform_index(rng, cs.size())];
    NormalizedEvent e;
    e.x3 = uniform_unit(rng);
    e.x1 = std::clamp(c.x1 + c.v1 * e.x3 + sigma * normal(rng), 0.0, 1.0 - 1e-9);
    e.x2 = std::clamp(c.x2 + c.v2 * e.x3 + sigma * normal(rng), 0.0, 1.0 - 1e-9);
    e.p_acc = uniform_index(rng, 2) == 0 ? 1.0 : -1.0;
    e.count = 1.0;
    e.h = static_cast<int>(e.x1 * 1024);
    e.w = static_cast<int>(e.x2 * 1024);
    batch.events.push_back(e);
  }
  return batch;
}

}  // namespace omnievent::synthetic
