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

// Loop-based reference implementations for tests. They share no code with the
// library beyond reading Eigen storage.
#ifndef OMNIEVENT_TESTS_NAIVE_HPP
#define OMNIEVENT_TESTS_NAIVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace naive {

using Grid = std::vector<std::vector<double>>;

template <typename M>
Grid to_grid(const M& m) {
  Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) g[r][c] = m(r, c);
  }
  return g;
}

template <typename M>
double max_abs_diff(const Grid& a, const M& b) {
  if (a.size() != static_cast<std::size_t>(b.rows())) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != static_cast<std::size_t>(b.cols())) return std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      worst = std::max(worst, std::abs(a[r][c] - b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    }
  }
  return worst;
}

inline Grid matmul(const Grid& a, const Grid& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Grid out(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
      out[i][j] = s;
    }
  }
  return out;
}

inline Grid transpose(const Grid& a) {
  Grid out(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

// x * W + b, with W stored in x in_features x out_features.
inline Grid linear(const Grid& x, const Grid& w, const std::vector<double>* bias) {
  Grid out = matmul(x, w);
  if (bias) {
    for (auto& row : out) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += (*bias)[j];
    }
  }
  return out;
}

inline Grid add(const Grid& a, const Grid& b) {
  Grid out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
  }
  return out;
}

inline Grid map(const Grid& a, double (*f)(double)) {
  Grid out = a;
  for (auto& row : out) {
    for (auto& v : row) v = f(v);
  }
  return out;
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }
inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

inline Grid softmax_rows(const Grid& a) {
  Grid out = a;
  for (auto& row : out) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : row) m = std::max(m, v);
    double s = 0.0;
    for (auto& v : row) {
      v = std::exp(v - m);
      s += v;
    }
    for (auto& v : row) v /= s;
  }
  return out;
}

inline Grid layer_norm(const Grid& x, const std::vector<double>& gamma, const std::vector<double>& beta,
                       double eps = 1e-5) {
  Grid out = x;
  for (auto& row : out) {
    double mu = 0.0;
    for (double v : row) mu += v;
    mu /= static_cast<double>(row.size());
    double var = 0.0;
    for (double v : row) var += (v - mu) * (v - mu);
    var /= static_cast<double>(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mu) / std::sqrt(var + eps) * gamma[j] + beta[j];
  }
  return out;
}

inline Grid cols(const Grid& a, std::size_t begin, std::size_t count) {
  Grid out(a.size(), std::vector<double>(count));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < count; ++j) out[i][j] = a[i][begin + j];
  }
  return out;
}

inline Grid hcat(const Grid& a, const Grid& b) {
  Grid out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

inline Grid scale(Grid a, double s) {
  for (auto& row : a) {
    for (auto& v : row) v *= s;
  }
  return a;
}

struct LinearParams {
  Grid w;
  std::vector<double> b;
  bool has_bias = true;

  Grid operator()(const Grid& x) const { return linear(x, w, has_bias ? &b : nullptr); }
};

// Multi-head attention over rows of x; heads split the channel axis evenly.
inline Grid attention(const Grid& x, const LinearParams& qkv, const LinearParams& proj, int heads,
                      std::vector<Grid>* weights = nullptr) {
  const std::size_t c = x[0].size();
  const std::size_t d = c / static_cast<std::size_t>(heads);
  const Grid all = qkv(x);
  Grid merged;
  for (int h = 0; h < heads; ++h) {
    const Grid q = cols(all, h * d, d);
    const Grid k = cols(all, c + h * d, d);
    const Grid v = cols(all, 2 * c + h * d, d);
    const Grid a = softmax_rows(scale(matmul(q, transpose(k)), 1.0 / std::sqrt(static_cast<double>(d))));
    if (weights) weights->push_back(a);
    const Grid o = matmul(a, v);
    merged = merged.empty() ? o : hcat(merged, o);
  }
  return proj(merged);
}

struct CrossAttentionParams {
  LinearParams q, k, v1, v2, fc1, fc2, out;
};

// out = conv_out(softmax(relu(fc2(relu(fc1(Q K^T / sqrt(C)))))) [V2 | V1]),
// Q, V2 from y and K, V1 from x.
inline Grid cross_attention(const Grid& x, const Grid& y, const CrossAttentionParams& p, Grid* attn = nullptr) {
  const double c = static_cast<double>(x[0].size());
  const Grid e = scale(matmul(p.q(y), transpose(p.k(x))), 1.0 / std::sqrt(c));
  const Grid e2 = map(p.fc2(map(p.fc1(e), relu)), relu);
  const Grid a = softmax_rows(e2);
  if (attn) *attn = a;
  return p.out(matmul(a, hcat(p.v2(y), p.v1(x))));
}

// Brute-force K nearest neighbors with a second, independent loop structure:
// full sort of (distance, index) pairs.
inline std::vector<std::vector<std::uint32_t>> knn(const std::vector<std::array<double, 3>>& pts, std::size_t k,
                                                   int metric /*0 spatial, 1 temporal, 2 euclidean*/) {
  std::vector<std::vector<std::uint32_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::pair<double, std::uint32_t>> cand;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1], dt = pts[i][2] - pts[j][2];
      const double d = metric == 0 ? dx * dx + dy * dy : metric == 1 ? dt * dt : dx * dx + dy * dy + dt * dt;
      cand.emplace_back(d, static_cast<std::uint32_t>(j));
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t r = 0; r < std::min(k, cand.size()); ++r) out[i].push_back(cand[r].second);
  }
  return out;
}

// Per-pixel reduction via a hash map keyed by row-major pixel id.
inline Grid scatter(const std::vector<std::pair<int, int>>& pixels, const Grid& features, int height, int width,
                    bool use_max) {
  const std::size_t c = features.empty() ? 0 : features[0].size();
  std::unordered_map<long, std::pair<std::vector<double>, int>> cells;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const long key = static_cast<long>(pixels[i].first) * width + pixels[i].second;
    auto it = cells.find(key);
    if (it == cells.end()) {
      cells.emplace(key, std::make_pair(features[i], 1));
      continue;
    }
    for (std::size_t j = 0; j < c; ++j) {
      it->second.first[j] = use_max ? std::max(it->second.first[j], features[i][j]) : it->second.first[j] + features[i][j];
    }
    ++it->second.second;
  }
  Grid out(static_cast<std::size_t>(height) * width, std::vector<double>(c, 0.0));
  for (const auto& [key, val] : cells) {
    for (std::size_t j = 0; j < c; ++j) out[key][j] = use_max ? val.first[j] : val.first[j] / val.second;
  }
  return out;
}

struct RawEvent {
  double t;
  int h, w, p;
};

// Positive count, negative count, latest positive time, latest negative time
// (times normalized over the stream span).
inline Grid stat_channels(const std::vector<RawEvent>& events, int height, int width) {
  Grid out(static_cast<std::size_t>(height) * width, std::vector<double>(4, 0.0));
  if (events.empty()) return out;
  double lo = events[0].t, hi = events[0].t;
  for (const auto& e : events) {
    lo = std::min(lo, e.t);
    hi = std::max(hi, e.t);
  }
  std::map<long, std::vector<const RawEvent*>> by_pixel;
  for (const auto& e : events) by_pixel[static_cast<long>(e.h) * width + e.w].push_back(&e);
  for (const auto& [pix, list] : by_pixel) {
    for (const RawEvent* e : list) {
      const int slot = e->p > 0 ? 0 : 1;
      out[pix][slot] += 1.0;
      const double tn = hi > lo ? (e->t - lo) / (hi - lo) : 0.0;
      if (tn > out[pix][2 + slot]) out[pix][2 + slot] = tn;
    }
  }
  return out;
}

}  // namespace naive

#endif  // OMNIEVENT_TESTS_NAIVE_HPP
