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

#include "omnievent/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <future>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "omnievent/error.hpp"
#include "omnievent/serial.hpp"
#include "omnievent/sfc.hpp"
#include "omnievent/synthetic.hpp"

namespace omnievent::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

serial::SerializedBatch serialize_st(const EventBatch& batch, int patch) {
  const sfc::CurveOrder order{sfc::CurveKind::kHilbert, 3, 10};
  const auto cells = serial::branch_cells(batch, serial::BranchKind::kSpatioTemporal, order.bits);
  return serial::serialize_codes(sfc::encode_all(cells, order), order, patch);
}

// One seed's rows, one per size; the caller averages over seeds. Serialize
// timing is interleaved across sizes in rounds so slow periods of the machine
// hit every size alike; each size keeps its fastest repeat.
std::vector<BenchRow> measure_seed(std::span<const std::size_t> sizes, std::size_t k, int patch, std::uint64_t seed,
                                   const BenchOptions& options) {
  constexpr int kRounds = 5;
  std::vector<BenchRow> rows(sizes.size());
  std::vector<EventBatch> batches;
  std::vector<serial::SerializedBatch> serialized(sizes.size());
  for (std::size_t n : sizes) batches.push_back(synthetic::drifting_clusters(n, seed));

  std::vector<double> best(sizes.size(), std::numeric_limits<double>::infinity());
  const double round_budget = options.min_serialize_ms / kRounds;
  for (int round = 0; round < kRounds; ++round) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto budget_start = Clock::now();
      int reps = 0;
      while (reps < std::max(options.repeats, 1) || elapsed_ms(budget_start) < round_budget) {
        const auto t0 = Clock::now();
        serialized[i] = serialize_st(batches[i], patch);
        best[i] = std::min(best[i], elapsed_ms(t0));
        ++reps;
      }
    }
  }

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    BenchRow& row = rows[i];
    const auto& ser = serialized[i];
    const auto pts = oracles::points_of(batches[i]);
    row.serialize_ms = best[i];
    row.patches = ser.patches.size();

    std::vector<std::vector<std::uint32_t>> neighbors;
    if (options.measure_knn) {
      row.knn_ms = std::numeric_limits<double>::infinity();
      for (int r = 0; r < std::max(options.repeats, 1); ++r) {
        const auto t0 = Clock::now();
        neighbors = oracles::knn(pts, k, oracles::Metric::kEuclidean3d);
        row.knn_ms = std::min(row.knn_ms, elapsed_ms(t0));
      }
    }

    if (options.measure_locality) {
      std::vector<std::vector<std::uint32_t>> patch_groups;
      for (const auto& p : ser.patches) {
        patch_groups.emplace_back(ser.perm.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                  ser.perm.begin() + static_cast<std::ptrdiff_t>(p.end));
      }
      const Spread ps = group_spread(pts, patch_groups);
      row.patch_spatial_spread = ps.spatial;
      row.patch_temporal_spread = ps.temporal;
      if (!neighbors.empty()) {
        for (std::size_t q = 0; q < neighbors.size(); ++q) neighbors[q].push_back(static_cast<std::uint32_t>(q));
        const Spread ks = group_spread(pts, neighbors);
        row.knn_spatial_spread = ks.spatial;
        row.knn_temporal_spread = ks.temporal;
      }
    }
  }
  return rows;
}

}  // namespace

Spread group_spread(std::span<const oracles::Point3> points, std::span<const std::vector<std::uint32_t>> groups) {
  Spread total;
  std::size_t counted = 0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    for (auto i : g) {
      c0 += points[i][0];
      c1 += points[i][1];
      c2 += points[i][2];
    }
    const double inv = 1.0 / static_cast<double>(g.size());
    c0 *= inv;
    c1 *= inv;
    c2 *= inv;
    double s = 0.0, t = 0.0;
    for (auto i : g) {
      s += std::hypot(points[i][0] - c0, points[i][1] - c1);
      t += std::abs(points[i][2] - c2);
    }
    total.spatial += s * inv;
    total.temporal += t * inv;
    ++counted;
  }
  if (counted) {
    total.spatial /= static_cast<double>(counted);
    total.temporal /= static_cast<double>(counted);
  }
  return total;
}

BenchReport bench_patch_vs_knn(std::span<const std::size_t> sizes, std::size_t k, int patch,
                               std::span<const std::uint64_t> seeds, const BenchOptions& options) {
  if (seeds.empty()) throw ParameterError("bench needs at least one seed");
  for (std::size_t n : sizes) {
    if (k > n) throw ParameterError("bench: K exceeds N");
  }

  // Seeds run concurrently only in throughput mode; timings then include contention.
  std::vector<std::vector<BenchRow>> parts(seeds.size());
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(options.threads), 1, seeds.size());
  for (std::size_t first = 0; first < seeds.size(); first += workers) {
    std::vector<std::future<std::vector<BenchRow>>> running;
    for (std::size_t s = first; s < std::min(first + workers, seeds.size()); ++s) {
      running.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, measure_seed, sizes, k,
                                   patch, seeds[s], options));
    }
    for (std::size_t s = 0; s < running.size(); ++s) parts[first + s] = running[s].get();
  }

  BenchReport report;
  const double inv = 1.0 / static_cast<double>(seeds.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    BenchRow row;
    row.scenario = "patch_vs_knn";
    row.n = sizes[i];
    row.k = k;
    row.patch = static_cast<std::size_t>(patch);
    row.serialize_bytes = sizes[i] * (sizeof(std::uint64_t) + sizeof(std::uint32_t) + sizeof(sfc::Cells));
    row.knn_bytes = sizes[i] * k * sizeof(std::uint32_t) + sizes[i] * (sizeof(double) + sizeof(std::uint32_t));
    for (const auto& part : parts) {
      const BenchRow& p = part[i];
      row.patches = p.patches;
      row.serialize_ms += p.serialize_ms * inv;
      row.knn_ms += p.knn_ms * inv;
      row.patch_spatial_spread += p.patch_spatial_spread * inv;
      row.patch_temporal_spread += p.patch_temporal_spread * inv;
      row.knn_spatial_spread += p.knn_spatial_spread * inv;
      row.knn_temporal_spread += p.knn_temporal_spread * inv;
    }
    report.rows.push_back(row);
  }
  return report;
}

BenchReport patch_size_sweep(std::size_t n, std::span<const int> patch_sizes, std::uint64_t seed) {
  BenchReport report;
  const EventBatch batch = synthetic::drifting_clusters(n, seed);
  const auto pts = oracles::points_of(batch);
  for (int p : patch_sizes) {
    const auto t0 = Clock::now();
    const auto ser = serialize_st(batch, p);
    BenchRow row;
    row.scenario = "patch_sweep";
    row.n = n;
    row.patch = static_cast<std::size_t>(p);
    row.patches = ser.patches.size();
    row.serialize_ms = elapsed_ms(t0);
    row.serialize_bytes = n * (sizeof(std::uint64_t) + sizeof(std::uint32_t) + sizeof(sfc::Cells));
    std::vector<std::vector<std::uint32_t>> groups;
    for (const auto& patch : ser.patches) {
      groups.emplace_back(ser.perm.begin() + static_cast<std::ptrdiff_t>(patch.begin),
                          ser.perm.begin() + static_cast<std::ptrdiff_t>(patch.end));
    }
    const Spread s = group_spread(pts, groups);
    row.patch_spatial_spread = s.spatial;
    row.patch_temporal_spread = s.temporal;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<int> default_patch_sizes() { return {16, 32, 64, 128, 256, 512, 1024}; }

void BenchReport::write_csv(std::ostream& out) const {
  out << "scenario,n,k,patch,patches,serialize_ms,knn_ms,serialize_bytes,knn_bytes,"
         "patch_spatial_spread,patch_temporal_spread,knn_spatial_spread,knn_temporal_spread\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{:.6f},{:.6f},{},{},{:.6g},{:.6g},{:.6g},{:.6g}\n", r.scenario, r.n, r.k, r.patch,
               r.patches, r.serialize_ms, r.knn_ms, r.serialize_bytes, r.knn_bytes, r.patch_spatial_spread,
               r.patch_temporal_spread, r.knn_spatial_spread, r.knn_temporal_spread);
  }
}

void BenchReport::write_table(std::ostream& out) const {
  fmt::print(out, "{:<14} {:>7} {:>5} {:>6} {:>8} {:>13} {:>11} {:>12} {:>12} {:>12} {:>12}\n", "scenario", "N", "K",
             "patch", "patches", "serialize_ms", "knn_ms", "patch_s", "patch_t", "knn_s", "knn_t");
  for (const auto& r : rows) {
    fmt::print(out, "{:<14} {:>7} {:>5} {:>6} {:>8} {:>13.4f} {:>11.3f} {:>12.5f} {:>12.5f} {:>12.5f} {:>12.5f}\n",
               r.scenario, r.n, r.k, r.patch, r.patches, r.serialize_ms, r.knn_ms, r.patch_spatial_spread,
               r.patch_temporal_spread, r.knn_spatial_spread, r.knn_temporal_spread);
  }
}

}  // namespace omnievent::bench
