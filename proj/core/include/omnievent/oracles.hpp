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

#ifndef OMNIEVENT_ORACLES_HPP
#define OMNIEVENT_ORACLES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "omnievent/event_model.hpp"

// Brute-force references. None of these share code with the paths they check.
namespace omnievent::oracles {

enum class Metric { kSpatial, kTemporal, kEuclidean3d };

/// (x1, x2, x3) of a point.
using Point3 = std::array<double, 3>;

std::vector<Point3> points_of(const EventBatch& batch);

/// Exact K nearest neighbors of every point under the metric: spatial uses
/// (x1, x2), temporal uses x3, euclidean3d all three. The point itself is
/// excluded; ties are broken by lower index. K = N yields the N-1 others.
/// Throws ParameterError for K > N.
std::vector<std::vector<std::uint32_t>> knn(std::span<const Point3> points, std::size_t k, Metric metric);

/// Hilbert index by recursive quadrant subdivision, for 2-D grids of up to
/// 2^8 cells per side. Fixes the visiting order (0,0), (0,1), (1,1), (1,0).
std::uint64_t hilbert_recursive(std::uint32_t x, std::uint32_t y, int bits);

/// Per-(segment, pixel) grouping by ordered map; output sorted by
/// (segment, h, w), timestamps summed in input order.
std::vector<FusedEvent> fuse_grouping(std::span<const Event> events, int segments, TimeSpan span);

}  // namespace omnievent::oracles

#endif  // OMNIEVENT_ORACLES_HPP
