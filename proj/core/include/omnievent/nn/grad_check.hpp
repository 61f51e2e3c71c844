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

#ifndef OMNIEVENT_NN_GRAD_CHECK_HPP
#define OMNIEVENT_NN_GRAD_CHECK_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "omnievent/nn/layers.hpp"

namespace omnievent::nn {

struct GradCheckOptions {
  double eps = 1e-5;
  /// Denominator floor of the relative error, so gradients that are zero up to
  /// round-off are compared absolutely.
  double abs_floor = 1e-6;
  /// Retries with jittered parameters when a max reduction saw an exact tie.
  int tie_retries = 3;
  double tie_jitter = 1e-7;
  std::uint64_t seed = 0;
  std::size_t max_parameters = 10000;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
  std::uint64_t ties = 0;
  bool ties_perturbed = false;
};

/// |a - n| / max(|a|, |n|, floor).
double relative_error(double analytic, double numeric, double floor);

/// Compares reverse-mode gradients of `loss` (a 1x1 value) with central
/// differences (f(p + eps) - f(p - eps)) / 2 eps for every scalar in `params`.
/// Throws ParameterError when the parameter count exceeds max_parameters.
GradCheckResult grad_check(const std::function<Var()>& loss, const ParameterList& params,
                           const GradCheckOptions& options = {});

}  // namespace omnievent::nn

#endif  // OMNIEVENT_NN_GRAD_CHECK_HPP
