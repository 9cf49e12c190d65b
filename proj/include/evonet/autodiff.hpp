// Copyright 2026 The EvoNet Authors
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

#pragma once

// Reverse-mode automatic differentiation over dense Eigen matrices.
//
// A Tape records every intermediate value of one forward pass together with
// a closure that pushes its output gradient into its parents. Parameters are
// leaves bound to caller-owned storage; Tape::backward accumulates into
// Parameter::grad. One tape per forward pass; tapes are not thread-safe.

#include <Eigen/Dense>
#include <deque>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace evonet::ad {

using Matrix = Eigen::MatrixXd;

struct Parameter {
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

class Var {
 public:
  Var() = default;
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  using Backprop = std::function<void(Tape&, const Matrix& out_grad, const Matrix& out_value)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// Leaf bound to param; repeated calls on one tape return the same Var.
  Var parameter(Parameter& param);

  /// Records an op. `backprop` is dropped when no parent needs a gradient.
  Var record(Matrix value, std::span<const Var> parents, Backprop backprop);

  /// Seeds d(output)/d(output) = 1 for a 1x1 output and runs the sweep.
  void backward(const Var& output);

  const Matrix& value(int id) const { return nodes_[id].value; }
  bool requires_grad(const Var& v) const { return nodes_[v.id()].requires_grad; }
  /// Gradient slot of v, zero-initialised on first use.
  Matrix& grad(const Var& v);
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backprop backprop;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };
  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, int> bound_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }

// Elementwise and linear-algebra ops. Shapes follow Eigen conventions; each op
// throws DimensionError on mismatch.
Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);            // Hadamard
Var add_bias(const Var& a, const Var& column);  // broadcast column across a's columns
Var scale(const Var& a, double s);
Var one_minus(const Var& a);
Var sigmoid(const Var& a);
Var tanh(const Var& a);
Var transpose(const Var& a);
Var concat_rows(const Var& top, const Var& bottom);
Var hcat(std::span<const Var> parts);
Var columns(const Var& a, Eigen::Index start, Eigen::Index count);
Var gather_columns(const Var& a, std::span<const int> index);
/// out.col(index[k]) += a.col(k); out has `num_cols` columns.
Var scatter_add_columns(const Var& a, std::span<const int> index, Eigen::Index num_cols);
/// Softmax over all entries (used on 1xN score rows).
Var softmax(const Var& a);
Var sum(const Var& a);             // 1x1
Var squared_norm(const Var& a);    // 1x1
Var add_scalars(std::span<const Var> scalars);

/// Sum over entries of -[t log s(z) + (1-t) log(1-s(z))], computed stably from logits z.
Var bce_with_logits_sum(const Var& logits, const Matrix& targets);
/// Sum over entries of t (1 - s(z)) + (1 - t) s(z).
Var linear_edge_loss_sum(const Var& logits, const Matrix& targets);
/// Sum of squared differences to a constant target.
Var squared_error_sum(const Var& a, const Matrix& target);

}  // namespace evonet::ad
