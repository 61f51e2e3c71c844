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

#include "omnievent/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "omnievent/error.hpp"

namespace omnievent::nn {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const std::function<Var()>& loss, const ParameterList& params,
                           const GradCheckOptions& options) {
  if (parameter_count(params) > options.max_parameters) {
    throw ParameterError("grad_check: too many parameters for finite differences");
  }
  GradCheckResult result;
  Rng rng(options.seed);

  std::vector<Matrix> analytic;
  for (int attempt = 0;; ++attempt) {
    for (const auto& p : params) p.var.zero_grad();
    const std::uint64_t ties_before = max_tie_count();
    const Var value = loss();
    value.backward();
    result.ties = max_tie_count() - ties_before;
    analytic.clear();
    for (const auto& p : params) analytic.push_back(p.var.grad());
    if (result.ties == 0 || attempt >= options.tie_retries) break;
    result.ties_perturbed = true;
    for (const auto& p : params) {
      Matrix& m = p.var.mutable_value();
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] += (2.0 * uniform_unit(rng) - 1.0) * options.tie_jitter;
    }
  }

  NoGradGuard no_grad;
  const auto eval = [&loss] { return loss().value()(0, 0); };
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& m = params[k].var.mutable_value();
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double original = m.data()[i];
      m.data()[i] = original + options.eps;
      const double plus = eval();
      m.data()[i] = original - options.eps;
      const double minus = eval();
      m.data()[i] = original;
      const double numeric = (plus - minus) / (2.0 * options.eps);
      const double a = analytic[k].data()[i];
      const double err = relative_error(a, numeric, options.abs_floor);
      ++result.checked;
      if (err > result.max_rel_error || result.worst_index < 0) {
        result.max_rel_error = err;
        result.worst_parameter = params[k].name;
        result.worst_index = i;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace omnievent::nn
