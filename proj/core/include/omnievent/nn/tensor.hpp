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

#ifndef OMNIEVENT_NN_TENSOR_HPP
#define OMNIEVENT_NN_TENSOR_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace omnievent::nn {

/// Dense row-major matrix. Point sets are laid out (points x channels).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Node {
  Matrix value;
  Matrix grad;  // empty until something flows into it
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;
};

/// Handle to a value in a dynamically recorded computation graph. Copies share
/// the node. Results only record their inputs when gradients are enabled and at
/// least one input requires a gradient, so inference-only graphs release
/// intermediates as soon as their handles go out of scope.
class Var {
 public:
  Var() = default;
  explicit Var(Matrix value, bool requires_grad = false);

  const Matrix& value() const { return node_->value; }
  /// Leaf mutation (optimizer steps, finite differences). Not tracked.
  Matrix& mutable_value() const { return node_->value; }
  /// The accumulated gradient, or a zero matrix of the value's shape.
  Matrix grad() const;
  bool has_grad() const { return node_->grad.size() > 0; }
  bool requires_grad() const { return node_ && node_->requires_grad; }

  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  bool defined() const noexcept { return static_cast<bool>(node_); }

  /// Reverse-mode sweep from a 1x1 value; the seed gradient is 1.
  void backward() const;
  void zero_grad() const;

  const std::shared_ptr<Node>& node() const noexcept { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

bool grad_enabled() noexcept;

/// Disables graph recording on this thread for the guard's lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Number of exact ties seen by max reductions on this thread. Max routes the
/// subgradient to the first maximal row; grad_check watches this counter.
std::uint64_t max_tie_count() noexcept;

// Linear algebra.
Var matmul(const Var& a, const Var& b);
/// a * b^T.
Var matmul_nt(const Var& a, const Var& b);
Var transpose(const Var& a);

// Elementwise.
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
/// Adds a 1 x C row to every row of a.
Var add_row(const Var& a, const Var& row);
Var relu(const Var& a);
/// Exact GELU, x * Phi(x).
Var gelu(const Var& a);

// Row-wise.
Var softmax_rows(const Var& a);
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);

// Structural.
Var slice_rows(const Var& a, Eigen::Index begin, Eigen::Index count);
Var slice_cols(const Var& a, Eigen::Index begin, Eigen::Index count);
Var concat_rows(std::span<const Var> parts);
Var concat_cols(std::span<const Var> parts);
/// out.row(k) = a.row(index[k]); the backward pass scatter-adds.
Var gather_rows(const Var& a, std::span<const std::uint32_t> index);

enum class Reduce { kMax, kMean };

/// Reduces rows of `a` into `groups` output rows; row i goes to group_of[i].
/// Groups without members are zero. Max routes the gradient to the first
/// maximal member per column.
Var segment_reduce(const Var& a, std::span<const std::uint32_t> group_of, std::size_t groups, Reduce reduce);

// Reductions to 1x1.
Var sum(const Var& a);
Var mean(const Var& a);
/// Column means, 1 x C.
Var mean_rows(const Var& a);
/// mean((a - target)^2).
Var mse(const Var& a, const Matrix& target);
/// sum(a .* weights), a fixed random projection used by gradient checks.
Var weighted_sum(const Var& a, const Matrix& weights);

/// Throws NumericError when the value holds NaN or infinity.
void require_finite(const Matrix& m, const char* where);

}  // namespace omnievent::nn

#endif  // OMNIEVENT_NN_TENSOR_HPP
