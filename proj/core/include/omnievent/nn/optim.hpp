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

#ifndef OMNIEVENT_NN_OPTIM_HPP
#define OMNIEVENT_NN_OPTIM_HPP

#include <cmath>
#include <vector>

#include "omnievent/nn/layers.hpp"

namespace omnievent::nn {

class Adam {
 public:
  explicit Adam(ParameterList params, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& p : params_) {
      m_.push_back(Matrix::Zero(p.var.rows(), p.var.cols()));
      v_.push_back(Matrix::Zero(p.var.rows(), p.var.cols()));
    }
  }

  void zero_grad() {
    for (const auto& p : params_) p.var.zero_grad();
  }

  void step() {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (!params_[i].var.has_grad()) continue;
      const Matrix g = params_[i].var.grad();
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
      Matrix& w = params_[i].var.mutable_value();
      w.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
    }
  }

  const ParameterList& parameters() const noexcept { return params_; }

 private:
  ParameterList params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  int t_ = 0;
};

}  // namespace omnievent::nn

#endif  // OMNIEVENT_NN_OPTIM_HPP
