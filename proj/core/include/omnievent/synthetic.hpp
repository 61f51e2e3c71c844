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

#ifndef OMNIEVENT_SYNTHETIC_HPP
#define OMNIEVENT_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "omnievent/event_model.hpp"

namespace omnievent::synthetic {

struct FrameSequence {
  std::vector<LogFrame> frames;
  std::vector<double> timestamps;
};

/// Single-pixel log-intensity ramp 0, 1.5 tau, 3.0 tau at pixel (1, 2) of a
/// 4 x 4 sensor, frames at t = 0, 0.5, 1.0. Produces exactly two events.
FrameSequence ramp_frames(const CameraGeometry& geometry);

/// A Gaussian bright blob crossing the sensor horizontally at constant speed.
/// direction > 0 moves left to right, otherwise right to left.
FrameSequence moving_blob(const CameraGeometry& geometry, int direction, int frames, double duration,
                          double sigma_px = 2.5, double contrast = 2.0, double row_fraction = 0.5);

/// Exactly `count` events of a blob moving in `direction`, drawn (sorted by
/// time) from the threshold simulation of moving_blob. The blob's row and
/// timing are jittered by the seed.
std::vector<Event> motion_events(const CameraGeometry& geometry, int direction, std::size_t count, std::uint64_t seed);

/// Uniformly random events over the sensor and [0, duration).
std::vector<Event> uniform_events(const CameraGeometry& geometry, std::size_t count, double duration,
                                  std::uint64_t seed);

/// Normalized points from Gaussian spatial clusters that drift over time:
/// dense in space, sparse in time.
EventBatch drifting_clusters(std::size_t count, std::uint64_t seed, int clusters = 8, double sigma = 0.02);

}  // namespace omnievent::synthetic

#endif  // OMNIEVENT_SYNTHETIC_HPP
