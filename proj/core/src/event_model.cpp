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

#include "omnievent/event_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>

#include "omnievent/error.hpp"
#include "omnievent/random.hpp"

namespace omnievent {

void CameraGeometry::validate() const {
  if (height < 1 || width < 1) {
    throw ParameterError("camera geometry needs height >= 1 and width >= 1");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterError("camera threshold tau must be a positive finite value");
  }
}

Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> EventBatch::features() const {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(
      static_cast<Eigen::Index>(events.size()), kInputFeatures);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const auto r = static_cast<Eigen::Index>(i);
    out(r, 0) = e.x1;
    out(r, 1) = e.x2;
    out(r, 2) = e.x3;
    out(r, 3) = e.p_acc;
    out(r, 4) = e.count;
  }
  return out;
}

TimeSpan time_span(std::span<const Event> events) {
  if (events.empty()) return {};
  TimeSpan span{events.front().t, events.front().t};
  for (const auto& e : events) {
    span.t_min = std::min(span.t_min, e.t);
    span.t_max = std::max(span.t_max, e.t);
  }
  return span;
}

std::vector<Event> synth_events(std::span<const LogFrame> frames, std::span<const double> timestamps,
                                const CameraGeometry& geometry) {
  geometry.validate();
  if (frames.size() < 2) throw ParameterError("synth_events needs at least two frames");
  if (timestamps.size() != frames.size()) throw ShapeError("one timestamp per frame is required");
  for (const auto& f : frames) {
    if (f.rows() != geometry.height || f.cols() != geometry.width) {
      throw ShapeError("frame shape " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                       " does not match the camera geometry");
    }
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) throw ParameterError("frame timestamps must increase strictly");
  }

  LogFrame reference = frames[0];
  std::vector<Event> events;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const LogFrame& frame = frames[i];
    for (int h = 0; h < geometry.height; ++h) {
      for (int w = 0; w < geometry.width; ++w) {
        const double change = frame(h, w) - reference(h, w);
        if (std::abs(change) > geometry.tau) {
          events.push_back({timestamps[i], h, w, change > 0.0 ? 1 : -1});
          reference(h, w) = frame(h, w);
        }
      }
    }
  }
  return events;
}

namespace {

struct CellKey {
  int segment;
  int h;
  int w;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t x = static_cast<std::uint32_t>(k.segment);
    x = x * 0x100000001B3ULL ^ static_cast<std::uint32_t>(k.h);
    x = x * 0x100000001B3ULL ^ static_cast<std::uint32_t>(k.w);
    return static_cast<std::size_t>(mix_seed(x));
  }
};

int segment_of(double t, int segments, TimeSpan span) {
  const double width = span.t_max - span.t_min;
  if (!(width > 0.0)) return 0;
  const double s = std::floor(static_cast<double>(segments) * (t - span.t_min) / width);
  if (!(s >= 0.0)) return 0;
  return static_cast<int>(std::min(s, static_cast<double>(segments - 1)));
}

}  // namespace

std::vector<FusedEvent> fuse(std::span<const Event> events, int segments, TimeSpan span) {
  if (segments < 1) throw ParameterError("fuse needs at least one temporal segment");

  struct Accum {
    double t_sum = 0.0;
    int p_acc = 0;
    int count = 0;
  };
  std::unordered_map<CellKey, std::size_t, CellKeyHash> index;
  std::vector<CellKey> keys;
  std::vector<Accum> accums;
  index.reserve(events.size());
  for (const auto& e : events) {
    const CellKey key{segment_of(e.t, segments, span), e.h, e.w};
    auto [it, inserted] = index.try_emplace(key, accums.size());
    if (inserted) {
      keys.push_back(key);
      accums.emplace_back();
    }
    Accum& a = accums[it->second];
    a.t_sum += e.t;
    a.p_acc += e.p;
    ++a.count;
  }

  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(keys[a].segment, keys[a].h, keys[a].w) < std::tie(keys[b].segment, keys[b].h, keys[b].w);
  });

  std::vector<FusedEvent> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    const Accum& a = accums[i];
    out.push_back({keys[i].h, keys[i].w, keys[i].segment, a.t_sum / a.count, a.p_acc, a.count});
  }
  return out;
}

std::vector<FusedEvent> fuse(std::span<const Event> events, int segments) {
  return fuse(events, segments, time_span(events));
}

EventBatch sample_and_normalize(std::span<const FusedEvent> fused, int samples, const CameraGeometry& geometry,
                                std::uint64_t seed, int segments, const SamplingOptions& options) {
  if (samples < 1) throw ParameterError("sample count M must be at least 1");
  if (fused.empty()) throw ParameterError("cannot sample from an empty fused event set");
  geometry.validate();

  const std::size_t n = fused.size();
  const auto m = static_cast<std::size_t>(samples);
  Rng rng(seed);

  std::vector<std::size_t> picks(n);
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  if (n >= m) {
    // Partial Fisher-Yates: the first m slots are a uniform draw without replacement.
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + uniform_index(rng, n - i);
      std::swap(picks[i], picks[j]);
    }
    picks.resize(m);
  } else {
    for (std::size_t i = n; i > 1; --i) {
      std::swap(picks[i - 1], picks[uniform_index(rng, i)]);
    }
    while (picks.size() < m) picks.push_back(uniform_index(rng, n));
  }

  double t_min = fused.front().t_avg;
  double t_max = t_min;
  for (const auto& f : fused) {
    t_min = std::min(t_min, f.t_avg);
    t_max = std::max(t_max, f.t_avg);
  }
  const double t_width = t_max - t_min;
  const double h_scale = options.normalize_h_by_H ? geometry.height : geometry.width;
  const double w_scale = geometry.width;

  EventBatch batch;
  batch.geometry = geometry;
  batch.segments = segments;
  batch.samples = samples;
  batch.events.reserve(m);
  for (std::size_t idx : picks) {
    const FusedEvent& f = fused[idx];
    NormalizedEvent e;
    e.x1 = f.h / h_scale;
    e.x2 = f.w / w_scale;
    e.x3 = t_width > 0.0 ? std::clamp((f.t_avg - t_min) / t_width, 0.0, 1.0) : 0.0;
    e.p_acc = f.p_acc;
    e.count = f.count;
    e.h = f.h;
    e.w = f.w;
    batch.events.push_back(e);
  }
  return batch;
}

}  // namespace omnievent
