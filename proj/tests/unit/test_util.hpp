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

#ifndef OMNIEVENT_TESTS_TEST_UTIL_HPP
#define OMNIEVENT_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <vector>

#include "naive.hpp"
#include "omnievent/event_model.hpp"
#include "omnievent/nn/layers.hpp"
#include "omnievent/random.hpp"

namespace testutil {

inline omnievent::nn::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, omnievent::Rng& rng,
                                           double scale = 1.0) {
  omnievent::nn::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * (2.0 * omnievent::uniform_unit(rng) - 1.0);
  return m;
}

inline naive::LinearParams params_of(const omnievent::nn::Linear& l) {
  naive::LinearParams p;
  p.w = naive::to_grid(l.weight.value());
  p.has_bias = l.bias.defined();
  if (p.has_bias) p.b.assign(l.bias.value().data(), l.bias.value().data() + l.bias.value().size());
  return p;
}

inline std::vector<double> row_vector(const omnievent::nn::Var& v) {
  return {v.value().data(), v.value().data() + v.value().size()};
}

// Events at uniformly random pixels and times; polarity +-1.
inline std::vector<omnievent::Event> random_events(std::size_t n, int height, int width, double t0, double t1,
                                                   std::uint64_t seed) {
  omnievent::Rng rng(seed);
  std::vector<omnievent::Event> out(n);
  for (auto& e : out) {
    e.t = t0 + (t1 - t0) * omnievent::uniform_unit(rng);
    e.h = static_cast<int>(omnievent::uniform_index(rng, static_cast<std::uint64_t>(height)));
    e.w = static_cast<int>(omnievent::uniform_index(rng, static_cast<std::uint64_t>(width)));
    e.p = omnievent::uniform_index(rng, 2) ? 1 : -1;
  }
  return out;
}

}  // namespace testutil

#endif  // OMNIEVENT_TESTS_TEST_UTIL_HPP
