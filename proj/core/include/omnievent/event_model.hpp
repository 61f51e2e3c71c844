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

#ifndef OMNIEVENT_EVENT_MODEL_HPP
#define OMNIEVENT_EVENT_MODEL_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace omnievent {

/// A raw event: pixel (h, w), timestamp in seconds, polarity +1 / -1.
struct Event {
  double t = 0.0;
  int h = 0;
  int w = 0;
  int p = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

struct CameraGeometry {
  int height = 180;
  int width = 240;
  double tau = 0.2;  // log-intensity trigger threshold

  /// Throws ParameterError unless height, width >= 1 and tau > 0.
  void validate() const;
  bool contains(int h, int w) const noexcept { return h >= 0 && h < height && w >= 0 && w < width; }
};

/// All events of one pixel and temporal segment, merged.
struct FusedEvent {
  int h = 0;
  int w = 0;
  int segment = 0;
  double t_avg = 0.0;
  int p_acc = 0;
  int count = 0;

  friend bool operator==(const FusedEvent&, const FusedEvent&) = default;
};

/// A fused event after scale normalization. `h` and `w` keep the source pixel
/// so later stages can scatter features back onto the sensor grid.
struct NormalizedEvent {
  double x1 = 0.0;  // h / W (or h / H with normalize_h_by_H)
  double x2 = 0.0;  // w / W
  double x3 = 0.0;  // (t - t_min) / (t_max - t_min), in [0, 1]
  double p_acc = 0.0;
  double count = 0.0;
  int h = 0;
  int w = 0;

  friend bool operator==(const NormalizedEvent&, const NormalizedEvent&) = default;
};

/// Number of per-point input features: (x1, x2, x3, p_acc, c).
inline constexpr int kInputFeatures = 5;

struct EventBatch {
  std::vector<NormalizedEvent> events;
  CameraGeometry geometry;
  int segments = 8;
  int samples = 4096;

  std::size_t size() const noexcept { return events.size(); }
  /// Row-major (size() x 5) feature matrix in the order x1, x2, x3, p_acc, c.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> features() const;
};

struct TimeSpan {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Min and max timestamp of a non-empty event collection; {0, 0} when empty.
TimeSpan time_span(std::span<const Event> events);

/// H x W log-intensity image, row-major.
using LogFrame = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Simulates a per-pixel threshold sensor over a frame sequence. Each pixel keeps
/// the log intensity of its last trigger (initially frame 0) and fires one event
/// at frame i when the change from that reference exceeds tau. Events come out
/// sorted by (t, h, w).
std::vector<Event> synth_events(std::span<const LogFrame> frames, std::span<const double> timestamps,
                                const CameraGeometry& geometry);

/// Merges events sharing a pixel and temporal segment. Segment index is
/// floor(T * (t - t_min) / (t_max - t_min)) clamped to [0, T-1]; a zero-length
/// span puts everything in segment 0. Output is sorted by (segment, h, w) and
/// member timestamps are summed in input order.
std::vector<FusedEvent> fuse(std::span<const Event> events, int segments, TimeSpan span);

/// Convenience overload taking the span from the events themselves.
std::vector<FusedEvent> fuse(std::span<const Event> events, int segments);

struct SamplingOptions {
  bool normalize_h_by_H = false;
};

/// Draws exactly `samples` points and normalizes them. Without replacement when
/// enough fused points exist; otherwise every fused point appears once (shuffled)
/// and the remainder is drawn with replacement. t_min / t_max come from the
/// fused set. Throws ParameterError for samples == 0 or an empty input.
EventBatch sample_and_normalize(std::span<const FusedEvent> fused, int samples, const CameraGeometry& geometry,
                                std::uint64_t seed, int segments = 8, const SamplingOptions& options = {});

}  // namespace omnievent

#endif  // OMNIEVENT_EVENT_MODEL_HPP
