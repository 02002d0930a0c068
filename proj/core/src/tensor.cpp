// Copyright 2026 The rvo-nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rvonav/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace rvonav::nn {

namespace {

thread_local bool g_grad_enabled = true;

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

void check_row(const Tensor& a, const Tensor& row, const char* op) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw std::invalid_argument(std::string(op) + ": expected a 1x" + std::to_string(a.cols()) +
                                " row");
  }
}

// Adds `g` into the parent's gradient when that parent is tracked.
void accumulate(detail::Node& parent, const Matrix& g) {
  if (parent.requires_grad) parent.grad_buffer() += g;
}

template <typename F>
Tensor unary(const Tensor& a, Matrix value, F&& local_grad) {
  return Tensor::from_op(std::move(value), {a},
                         [a, local_grad = std::forward<F>(local_grad)](detail::Node& self) {
                           accumulate(a.node(), local_grad(self));
                         });
}

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Tensor::Tensor(Matrix value, bool requires_grad) : node_(std::make_shared<detail::Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Eigen::Index rows, Eigen::Index cols, bool requires_grad) {
  return Tensor(Matrix::Zero(rows, cols), requires_grad);
}

void Tensor::zero_grad() {
  if (node_->grad.size() != 0) node_->grad.setZero();
}

Tensor Tensor::detach() const { return Tensor(node_->value, false); }

Tensor Tensor::from_op(Matrix value, std::vector<Tensor> inputs,
                       std::function<void(detail::Node&)> backward) {
  Tensor out(std::move(value), false);
  if (!g_grad_enabled) return out;
  const bool tracked = std::any_of(inputs.begin(), inputs.end(),
                                   [](const Tensor& t) { return t.requires_grad(); });
  if (!tracked) return out;
  out.node_->requires_grad = true;
  for (const Tensor& t : inputs) out.node_->parents.push_back(t.node_);
  out.node_->backward = std::move(backward);
  return out;
}

void Tensor::backward() const {
  if (rows() != 1 || cols() != 1) throw std::logic_error("backward: expected a scalar tensor");
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order of the subgraph.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.push_back({parent, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  node_->grad_buffer()(0, 0) += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* node = *it;
    if (node->backward && node->grad.size() != 0) node->backward(*node);
  }
  // Intermediate gradients are not needed after the sweep.
  for (detail::Node* node : order) {
    if (node->backward) node->grad.resize(0, 0);
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix value = a.value() * b.value();
  return Tensor::from_op(std::move(value), {a, b}, [a, b](detail::Node& self) {
    if (a.requires_grad()) a.node().grad_buffer().noalias() += self.grad * b.value().transpose();
    if (b.requires_grad()) b.node().grad_buffer().noalias() += a.value().transpose() * self.grad;
  });
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  return Tensor::from_op(a.value() + b.value(), {a, b}, [a, b](detail::Node& self) {
    accumulate(a.node(), self.grad);
    accumulate(b.node(), self.grad);
  });
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  return Tensor::from_op(a.value() - b.value(), {a, b}, [a, b](detail::Node& self) {
    accumulate(a.node(), self.grad);
    accumulate(b.node(), -self.grad);
  });
}

Tensor operator*(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  return Tensor::from_op(a.value().cwiseProduct(b.value()), {a, b}, [a, b](detail::Node& self) {
    accumulate(a.node(), self.grad.cwiseProduct(b.value()));
    accumulate(b.node(), self.grad.cwiseProduct(a.value()));
  });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  check_row(a, row, "add_row");
  Matrix value = a.value().rowwise() + row.value().row(0);
  return Tensor::from_op(std::move(value), {a, row}, [a, row](detail::Node& self) {
    accumulate(a.node(), self.grad);
    accumulate(row.node(), self.grad.colwise().sum());
  });
}

Tensor mul_row(const Tensor& a, const Tensor& row) {
  check_row(a, row, "mul_row");
  Matrix value = a.value().array().rowwise() * row.value().row(0).array();
  return Tensor::from_op(std::move(value), {a, row}, [a, row](detail::Node& self) {
    if (a.requires_grad()) {
      a.node().grad_buffer().array() += self.grad.array().rowwise() * row.value().row(0).array();
    }
    if (row.requires_grad()) {
      row.node().grad_buffer() += self.grad.cwiseProduct(a.value()).colwise().sum();
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  return unary(a, a.value() * s, [s](detail::Node& self) -> Matrix { return self.grad * s; });
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(a, (a.value().array() + s).matrix(),
               [](detail::Node& self) -> Matrix { return self.grad; });
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor sigmoid(const Tensor& a) {
  Matrix value = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return unary(a, std::move(value), [](detail::Node& self) -> Matrix {
    const auto y = self.value.array();
    return (self.grad.array() * y * (1.0 - y)).matrix();
  });
}

Tensor tanh(const Tensor& a) {
  Matrix value = a.value().array().tanh().matrix();
  return unary(a, std::move(value), [](detail::Node& self) -> Matrix {
    const auto y = self.value.array();
    return (self.grad.array() * (1.0 - y * y)).matrix();
  });
}

Tensor relu(const Tensor& a) {
  Matrix value = a.value().cwiseMax(0.0);
  return unary(a, std::move(value), [a](detail::Node& self) -> Matrix {
    return (a.value().array() > 0.0).select(self.grad, 0.0);
  });
}

Tensor exp(const Tensor& a) {
  Matrix value = a.value().array().exp().matrix();
  return unary(a, std::move(value), [](detail::Node& self) -> Matrix {
    return self.grad.cwiseProduct(self.value);
  });
}

Tensor square(const Tensor& a) {
  return unary(a, a.value().cwiseAbs2(), [a](detail::Node& self) -> Matrix {
    return 2.0 * self.grad.cwiseProduct(a.value());
  });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  Matrix value = a.value().cwiseMax(lo).cwiseMin(hi);
  return unary(a, std::move(value), [a, lo, hi](detail::Node& self) -> Matrix {
    const auto x = a.value().array();
    return ((x >= lo) && (x <= hi)).select(self.grad, 0.0);
  });
}

Tensor minimum(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "minimum");
  Matrix value = a.value().cwiseMin(b.value());
  return Tensor::from_op(std::move(value), {a, b}, [a, b](detail::Node& self) {
    const auto pick_a = a.value().array() <= b.value().array();
    accumulate(a.node(), pick_a.select(self.grad, 0.0));
    accumulate(b.node(), pick_a.select(0.0, self.grad));
  });
}

Tensor sum(const Tensor& a) {
  Matrix value(1, 1);
  value(0, 0) = a.value().sum();
  return unary(a, std::move(value), [a](detail::Node& self) -> Matrix {
    return Matrix::Constant(a.rows(), a.cols(), self.grad(0, 0));
  });
}

Tensor mean(const Tensor& a) {
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Tensor row_sum(const Tensor& a) {
  Matrix value = a.value().rowwise().sum();
  return unary(a, std::move(value), [a](detail::Node& self) -> Matrix {
    return self.grad.replicate(1, a.cols());
  });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("concat_cols: row counts differ");
  Matrix value(a.rows(), a.cols() + b.cols());
  value << a.value(), b.value();
  return Tensor::from_op(std::move(value), {a, b}, [a, b](detail::Node& self) {
    accumulate(a.node(), self.grad.leftCols(a.cols()));
    accumulate(b.node(), self.grad.rightCols(b.cols()));
  });
}

Tensor slice_cols(const Tensor& a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw std::invalid_argument("slice_cols: range out of bounds");
  }
  Matrix value = a.value().middleCols(start, count);
  return unary(a, std::move(value), [a, start, count](detail::Node& self) -> Matrix {
    Matrix g = Matrix::Zero(a.rows(), a.cols());
    g.middleCols(start, count) = self.grad;
    return g;
  });
}

Tensor blend(const Eigen::VectorXd& mask, const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "blend");
  if (mask.size() != a.rows()) throw std::invalid_argument("blend: mask length mismatch");
  const Eigen::VectorXd inv = Eigen::VectorXd::Ones(mask.size()) - mask;
  Matrix value = mask.asDiagonal() * a.value() + inv.asDiagonal() * b.value();
  return Tensor::from_op(std::move(value), {a, b}, [a, b, mask, inv](detail::Node& self) {
    if (a.requires_grad()) a.node().grad_buffer() += mask.asDiagonal() * self.grad;
    if (b.requires_grad()) b.node().grad_buffer() += inv.asDiagonal() * self.grad;
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  check_row(x, gain, "layer_norm gain");
  check_row(x, bias, "layer_norm bias");
  const Eigen::Index n = x.cols();
  const Eigen::VectorXd mu = x.value().rowwise().mean();
  Matrix centered = x.value().colwise() - mu;
  const Eigen::VectorXd inv_std =
      ((centered.cwiseAbs2().rowwise().sum() / double(n)).array() + eps).rsqrt().matrix();
  Matrix normed = inv_std.asDiagonal() * centered;
  Matrix value = (normed.array().rowwise() * gain.value().row(0).array()).matrix();
  value.rowwise() += bias.value().row(0);

  return Tensor::from_op(
      std::move(value), {x, gain, bias},
      [x, gain, bias, normed = std::move(normed), inv_std](detail::Node& self) {
        if (gain.requires_grad()) {
          gain.node().grad_buffer() += self.grad.cwiseProduct(normed).colwise().sum();
        }
        if (bias.requires_grad()) bias.node().grad_buffer() += self.grad.colwise().sum();
        if (x.requires_grad()) {
          const double n = double(normed.cols());
          Matrix dn = (self.grad.array().rowwise() * gain.value().row(0).array()).matrix();
          const Eigen::VectorXd dn_sum = dn.rowwise().sum();
          const Eigen::VectorXd dn_dot = dn.cwiseProduct(normed).rowwise().sum();
          Matrix dx = dn * n;
          dx.colwise() -= dn_sum;
          dx -= dn_dot.asDiagonal() * normed;
          x.node().grad_buffer() += (inv_std / n).asDiagonal() * dx;
        }
      });
}

}  // namespace rvonav::nn
