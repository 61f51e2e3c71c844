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

#include "omnievent/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "omnievent/error.hpp"

namespace omnievent::oracles {

std::vector<Point3> points_of(const EventBatch& batch) {
  std::vector<Point3> pts;
  pts.reserve(batch.size());
  for (const auto& e : batch.events) pts.push_back({e.x1, e.x2, e.x3});
  return pts;
}

namespace {

double squared_distance(const Point3& a, const Point3& b, Metric metric) {
  switch (metric) {
    case Metric::kSpatial:
      return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
    case Metric::kTemporal:
      return (a[2] - b[2]) * (a[2] - b[2]);
    case Metric::kEuclidean3d:
      return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]);
  }
  return 0.0;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> knn(std::span<const Point3> points, std::size_t k, Metric metric) {
  const std::size_t n = points.size();
  if (k > n) throw ParameterError("knn: K exceeds the point count");
  const std::size_t take = std::min(k, n == 0 ? 0 : n - 1);

  // Full distance row and a full sort of every candidate per query.
  std::vector<std::vector<std::uint32_t>> out(n);
  std::vector<double> dist(n);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = squared_distance(points[i], points[j], metric);
      if (j != i) order.push_back(static_cast<std::uint32_t>(j));
    }
    std::sort(order.begin(), order.end(),
              [&dist](std::uint32_t a, std::uint32_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    out[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

std::uint64_t hilbert_recursive(std::uint32_t x, std::uint32_t y, int bits) {
  if (bits <= 0) return 0;
  const std::uint32_t half = std::uint32_t{1} << (bits - 1);
  const bool right = x >= half;
  const bool up = y >= half;
  // Quadrants are visited lower-left, upper-left, upper-right, lower-right.
  const std::uint64_t quadrant = right ? (up ? 2 : 3) : (up ? 1 : 0);
  std::uint32_t lx = x & (half - 1);
  std::uint32_t ly = y & (half - 1);
  if (!up) {
    if (right) {
      lx = half - 1 - lx;
      ly = half - 1 - ly;
    }
    std::swap(lx, ly);
  }
  return quadrant * half * half + hilbert_recursive(lx, ly, bits - 1);
}

std::vector<FusedEvent> fuse_grouping(std::span<const Event> events, int segments, TimeSpan span) {
  std::map<std::tuple<int, int, int>, std::vector<const Event*>> groups;
  const double width = span.t_max - span.t_min;
  for (const auto& e : events) {
    int seg = 0;
    if (width > 0.0) {
      seg = static_cast<int>(std::floor(segments * (e.t - span.t_min) / width));
      seg = std::clamp(seg, 0, segments - 1);
    }
    groups[{seg, e.h, e.w}].push_back(&e);
  }
  std::vector<FusedEvent> out;
  for (const auto& [key, members] : groups) {
    double t_sum = 0.0;
    int p_acc = 0;
    for (const Event* e : members) {
      t_sum += e->t;
      p_acc += e->p;
    }
    const int c = static_cast<int>(members.size());
    out.push_back({std::get<1>(key), std::get<2>(key), std::get<0>(key), t_sum / c, p_acc, c});
  }
  return out;
}

}  // namespace omnievent::oracles
