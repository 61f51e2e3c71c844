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

#include "omnievent/nn/tensor.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "omnievent/error.hpp"

namespace omnievent::nn {

namespace {

thread_local bool g_grad_enabled = true;
thread_local std::uint64_t g_max_ties = 0;

using Backward = std::function<void(Node&)>;

Var make_result(Matrix value, std::initializer_list<const Var*> inputs, Backward backward) {
  Var out(std::move(value));
  if (!g_grad_enabled) return out;
  bool needs = false;
  for (const Var* v : inputs) needs = needs || v->requires_grad();
  if (!needs) return out;
  Node& node = *out.node();
  node.requires_grad = true;
  for (const Var* v : inputs) node.parents.push_back(v->node());
  node.backward = std::move(backward);
  return out;
}

Var make_result(Matrix value, std::span<const Var> inputs, Backward backward) {
  Var out(std::move(value));
  if (!g_grad_enabled) return out;
  bool needs = false;
  for (const Var& v : inputs) needs = needs || v.requires_grad();
  if (!needs) return out;
  Node& node = *out.node();
  node.requires_grad = true;
  for (const Var& v : inputs) node.parents.push_back(v.node());
  node.backward = std::move(backward);
  return out;
}

template <typename Expr>
void accumulate(Node& target, const Expr& g) {
  if (!target.requires_grad) return;
  if (target.grad.size() == 0) {
    target.grad = g;
  } else {
    target.grad += g;
  }
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " differ");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

Var::Var(Matrix value, bool requires_grad) : node_(std::make_shared<Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Matrix Var::grad() const {
  if (node_->grad.size() == 0) return Matrix::Zero(node_->value.rows(), node_->value.cols());
  return node_->grad;
}

void Var::zero_grad() const { node_->grad.resize(0, 0); }

void Var::backward() const {
  if (node_->value.rows() != 1 || node_->value.cols() != 1) {
    throw ShapeError("backward() needs a 1x1 root");
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order with parents first.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  accumulate(*node_, Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& n = **it;
    if (n.backward && n.grad.size() > 0) n.backward(n);
  }
}

bool grad_enabled() noexcept { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

std::uint64_t max_tie_count() noexcept { return g_max_ties; }

void require_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw NumericError(std::string(where) + ": non-finite value");
}

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
  return make_result(a.value() * b.value(), {&a, &b}, [](Node& n) {
    Node& a = *n.parents[0];
    Node& b = *n.parents[1];
    if (a.requires_grad) accumulate(a, n.grad * b.value.transpose());
    if (b.requires_grad) accumulate(b, a.value.transpose() * n.grad);
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt: column counts differ");
  return make_result(a.value() * b.value().transpose(), {&a, &b}, [](Node& n) {
    Node& a = *n.parents[0];
    Node& b = *n.parents[1];
    if (a.requires_grad) accumulate(a, n.grad * b.value);
    if (b.requires_grad) accumulate(b, n.grad.transpose() * a.value);
  });
}

Var transpose(const Var& a) {
  return make_result(a.value().transpose(), {&a}, [](Node& n) { accumulate(*n.parents[0], n.grad.transpose()); });
}

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  return make_result(a.value() + b.value(), {&a, &b}, [](Node& n) {
    accumulate(*n.parents[0], n.grad);
    accumulate(*n.parents[1], n.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape(a, b, "sub");
  return make_result(a.value() - b.value(), {&a, &b}, [](Node& n) {
    accumulate(*n.parents[0], n.grad);
    accumulate(*n.parents[1], -n.grad);
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a, b, "mul");
  return make_result(a.value().cwiseProduct(b.value()), {&a, &b}, [](Node& n) {
    Node& a = *n.parents[0];
    Node& b = *n.parents[1];
    if (a.requires_grad) accumulate(a, n.grad.cwiseProduct(b.value));
    if (b.requires_grad) accumulate(b, n.grad.cwiseProduct(a.value));
  });
}

Var scale(const Var& a, double s) {
  return make_result(a.value() * s, {&a}, [s](Node& n) { accumulate(*n.parents[0], n.grad * s); });
}

Var add_row(const Var& a, const Var& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw ShapeError("add_row: bias must be 1 x C");
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return make_result(std::move(out), {&a, &row}, [](Node& n) {
    accumulate(*n.parents[0], n.grad);
    if (n.parents[1]->requires_grad) accumulate(*n.parents[1], n.grad.colwise().sum());
  });
}

Var relu(const Var& a) {
  return make_result(a.value().cwiseMax(0.0), {&a}, [](Node& n) {
    Node& a = *n.parents[0];
    accumulate(a, (a.value.array() > 0.0).select(n.grad, 0.0));
  });
}

Var gelu(const Var& a) {
  Matrix out = a.value().unaryExpr([](double x) { return x * normal_cdf(x); });
  return make_result(std::move(out), {&a}, [](Node& n) {
    Node& a = *n.parents[0];
    const Matrix d = a.value.unaryExpr([](double x) { return normal_cdf(x) + x * normal_pdf(x); });
    accumulate(a, n.grad.cwiseProduct(d));
  });
}

Var softmax_rows(const Var& a) {
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double m = a.value().row(r).maxCoeff();
    out.row(r) = (a.value().row(r).array() - m).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return make_result(std::move(out), {&a}, [](Node& n) {
    const Matrix& y = n.value;
    const Eigen::VectorXd dots = n.grad.cwiseProduct(y).rowwise().sum();
    Matrix g = n.grad;
    g.colwise() -= dots;
    accumulate(*n.parents[0], y.cwiseProduct(g));
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Eigen::Index c = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != c || beta.rows() != 1 || beta.cols() != c) {
    throw ShapeError("layer_norm: scale and offset must be 1 x C");
  }
  Matrix xhat(x.rows(), c);
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.value().row(r).mean();
    const auto centered = (x.value().row(r).array() - mu).matrix();
    const double var = centered.squaredNorm() / static_cast<double>(c);
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = centered * inv_std(r);
  }
  Matrix out = xhat;
  out.array().rowwise() *= gamma.value().row(0).array();
  out.rowwise() += beta.value().row(0);
  return make_result(std::move(out), {&x, &gamma, &beta},
                     [xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& n) {
                       Node& x = *n.parents[0];
                       Node& gamma = *n.parents[1];
                       Node& beta = *n.parents[2];
                       if (gamma.requires_grad) accumulate(gamma, n.grad.cwiseProduct(xhat).colwise().sum());
                       if (beta.requires_grad) accumulate(beta, n.grad.colwise().sum());
                       if (!x.requires_grad) return;
                       Matrix dxhat = n.grad;
                       dxhat.array().rowwise() *= gamma.value.row(0).array();
                       const double inv_c = 1.0 / static_cast<double>(xhat.cols());
                       Matrix dx(xhat.rows(), xhat.cols());
                       for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
                         const double m1 = dxhat.row(r).sum() * inv_c;
                         const double m2 = dxhat.row(r).dot(xhat.row(r)) * inv_c;
                         dx.row(r) = inv_std(r) * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2).matrix();
                       }
                       accumulate(x, dx);
                     });
}

Var slice_rows(const Var& a, Eigen::Index begin, Eigen::Index count) {
  if (begin < 0 || count < 0 || begin + count > a.rows()) throw ShapeError("slice_rows: range out of bounds");
  return make_result(a.value().middleRows(begin, count), {&a}, [begin, count](Node& n) {
    Node& a = *n.parents[0];
    if (!a.requires_grad) return;
    if (a.grad.size() == 0) a.grad = Matrix::Zero(a.value.rows(), a.value.cols());
    a.grad.middleRows(begin, count) += n.grad;
  });
}

Var slice_cols(const Var& a, Eigen::Index begin, Eigen::Index count) {
  if (begin < 0 || count < 0 || begin + count > a.cols()) throw ShapeError("slice_cols: range out of bounds");
  return make_result(a.value().middleCols(begin, count), {&a}, [begin, count](Node& n) {
    Node& a = *n.parents[0];
    if (!a.requires_grad) return;
    if (a.grad.size() == 0) a.grad = Matrix::Zero(a.value.rows(), a.value.cols());
    a.grad.middleCols(begin, count) += n.grad;
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_rows: nothing to concatenate");
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts.front().cols()) throw ShapeError("concat_rows: column counts differ");
    rows += p.rows();
  }
  Matrix out(rows, parts.front().cols());
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return make_result(std::move(out), parts, [](Node& n) {
    Eigen::Index at = 0;
    for (auto& p : n.parents) {
      const Eigen::Index r = p->value.rows();
      if (p->requires_grad) accumulate(*p, n.grad.middleRows(at, r));
      at += r;
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: nothing to concatenate");
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts.front().rows()) throw ShapeError("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(parts.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return make_result(std::move(out), parts, [](Node& n) {
    Eigen::Index at = 0;
    for (auto& p : n.parents) {
      const Eigen::Index c = p->value.cols();
      if (p->requires_grad) accumulate(*p, n.grad.middleCols(at, c));
      at += c;
    }
  });
}

Var gather_rows(const Var& a, std::span<const std::uint32_t> index) {
  Matrix out(static_cast<Eigen::Index>(index.size()), a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= a.rows()) throw ShapeError("gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(k)) = a.value().row(index[k]);
  }
  std::vector<std::uint32_t> idx(index.begin(), index.end());
  return make_result(std::move(out), {&a}, [idx = std::move(idx)](Node& n) {
    Node& a = *n.parents[0];
    if (!a.requires_grad) return;
    if (a.grad.size() == 0) a.grad = Matrix::Zero(a.value.rows(), a.value.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) a.grad.row(idx[k]) += n.grad.row(static_cast<Eigen::Index>(k));
  });
}

Var segment_reduce(const Var& a, std::span<const std::uint32_t> group_of, std::size_t groups, Reduce reduce) {
  if (group_of.size() != static_cast<std::size_t>(a.rows())) {
    throw ShapeError("segment_reduce: one group id per row is required");
  }
  const Eigen::Index c = a.cols();
  const auto g_rows = static_cast<Eigen::Index>(groups);
  Matrix out = Matrix::Zero(g_rows, c);
  std::vector<std::uint32_t> ids(group_of.begin(), group_of.end());
  for (auto g : ids) {
    if (g >= groups) throw ShapeError("segment_reduce: group id out of range");
  }

  if (reduce == Reduce::kMean) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(g_rows);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.row(ids[i]) += a.value().row(static_cast<Eigen::Index>(i));
      counts(ids[i]) += 1.0;
    }
    for (Eigen::Index g = 0; g < g_rows; ++g) {
      if (counts(g) > 0.0) out.row(g) /= counts(g);
    }
    return make_result(std::move(out), {&a}, [ids = std::move(ids), counts = std::move(counts)](Node& n) {
      Matrix g(static_cast<Eigen::Index>(ids.size()), n.grad.cols());
      for (std::size_t i = 0; i < ids.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = n.grad.row(ids[i]) / counts(ids[i]);
      accumulate(*n.parents[0], g);
    });
  }

  // argmax[g * c + k] = source row of the maximum, -1 for empty groups.
  std::vector<std::int64_t> argmax(static_cast<std::size_t>(g_rows * c), -1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index k = 0; k < c; ++k) {
      auto& slot = argmax[static_cast<std::size_t>(ids[i] * c + k)];
      const double v = a.value()(r, k);
      if (slot < 0 || v > out(ids[i], k)) {
        slot = r;
        out(ids[i], k) = v;
      } else if (v == out(ids[i], k)) {
        ++g_max_ties;
      }
    }
  }
  return make_result(std::move(out), {&a}, [argmax = std::move(argmax), c](Node& n) {
    Node& a = *n.parents[0];
    if (!a.requires_grad) return;
    if (a.grad.size() == 0) a.grad = Matrix::Zero(a.value.rows(), a.value.cols());
    for (Eigen::Index g = 0; g < n.grad.rows(); ++g) {
      for (Eigen::Index k = 0; k < c; ++k) {
        const auto src = argmax[static_cast<std::size_t>(g * c + k)];
        if (src >= 0) a.grad(src, k) += n.grad(g, k);
      }
    }
  });
}

Var sum(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return make_result(std::move(out), {&a}, [](Node& n) {
    Node& a = *n.parents[0];
    accumulate(a, Matrix::Constant(a.value.rows(), a.value.cols(), n.grad(0, 0)));
  });
}

Var mean(const Var& a) { return scale(sum(a), 1.0 / static_cast<double>(a.value().size())); }

Var mean_rows(const Var& a) {
  const double inv = 1.0 / static_cast<double>(a.rows());
  return make_result(a.value().colwise().mean(), {&a}, [inv](Node& n) {
    Node& a = *n.parents[0];
    Matrix g(a.value.rows(), a.value.cols());
    g.rowwise() = n.grad.row(0) * inv;
    accumulate(a, g);
  });
}

Var mse(const Var& a, const Matrix& target) {
  if (a.rows() != target.rows() || a.cols() != target.cols()) throw ShapeError("mse: target shape differs");
  Matrix diff = a.value() - target;
  Matrix out(1, 1);
  const double inv = 1.0 / static_cast<double>(diff.size());
  out(0, 0) = diff.squaredNorm() * inv;
  return make_result(std::move(out), {&a}, [diff = std::move(diff), inv](Node& n) {
    accumulate(*n.parents[0], diff * (2.0 * inv * n.grad(0, 0)));
  });
}

Var weighted_sum(const Var& a, const Matrix& weights) {
  if (a.rows() != weights.rows() || a.cols() != weights.cols()) throw ShapeError("weighted_sum: shape differs");
  Matrix out(1, 1);
  out(0, 0) = a.value().cwiseProduct(weights).sum();
  return make_result(std::move(out), {&a}, [weights](Node& n) { accumulate(*n.parents[0], weights * n.grad(0, 0)); });
}

}  // namespace omnievent::nn
