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

#ifndef OMNIEVENT_BENCH_HPP
#define OMNIEVENT_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "omnievent/event_model.hpp"
#include "omnievent/oracles.hpp"

namespace omnievent::bench {

/// One measured configuration. Times are the fastest of the repeats, averaged over
/// seeds. Spreads are mean distances of group members to the group centroid.
struct BenchRow {
  std::string scenario;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t patch = 0;
  std::size_t patches = 0;
  double serialize_ms = 0.0;
  double knn_ms = 0.0;
  std::size_t serialize_bytes = 0;
  std::size_t knn_bytes = 0;
  double patch_spatial_spread = 0.0;
  double patch_temporal_spread = 0.0;
  double knn_spatial_spread = 0.0;
  double knn_temporal_spread = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  void write_csv(std::ostream& out) const;
  void write_table(std::ostream& out) const;
};

struct BenchOptions {
  /// Minimum repeats per timing; serialize timing also spends at least min_serialize_ms per size.
  int repeats = 3;
  double min_serialize_ms = 100.0;
  bool measure_knn = true;
  bool measure_locality = true;
  /// Seeds measured concurrently (throughput mode); 1 keeps timings contention-free.
  int threads = 1;
};

struct Spread {
  double spatial = 0.0;
  double temporal = 0.0;
};

/// Mean over groups of the members' mean distance to their centroid, in
/// (x1, x2) and in x3.
Spread group_spread(std::span<const oracles::Point3> points, std::span<const std::vector<std::uint32_t>> groups);

/// For each N: serialize + partition (3-D Hilbert, patch size p) against brute
/// force KNN with the same K, on drifting-cluster data.
BenchReport bench_patch_vs_knn(std::span<const std::size_t> sizes, std::size_t k, int patch,
                               std::span<const std::uint64_t> seeds, const BenchOptions& options = {});

/// Locality of curve patches for each patch size (no KNN timing).
BenchReport patch_size_sweep(std::size_t n, std::span<const int> patch_sizes, std::uint64_t seed);

/// Patch sizes swept by default: 16 ... 1024.
std::vector<int> default_patch_sizes();

}  // namespace omnievent::bench

#endif  // OMNIEVENT_BENCH_HPP
