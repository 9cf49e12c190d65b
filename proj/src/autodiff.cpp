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

#include "evonet/autodiff.hpp"

#include <cmath>
#include <string>

#include "evonet/errors.hpp"

namespace evonet::ad {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix sigmoid_of(const Matrix& m) { return m.unaryExpr(&stable_sigmoid); }

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require(bool ok, const char* op, const Matrix& a, const Matrix& b) {
  if (!ok) throw DimensionError(std::string(op) + ": shape " + shape(a) + " vs " + shape(b));
}

template <typename Expr>
void accumulate(Tape& t, const Var& v, const Expr& g) {
  if (t.requires_grad(v)) t.grad(v) += g;
}

}  // namespace

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::parameter(Parameter& param) {
  if (auto it = bound_.find(&param); it != bound_.end()) return Var(this, it->second);
  if (param.grad.rows() != param.value.rows() || param.grad.cols() != param.value.cols()) param.zero_grad();
  nodes_.push_back(Node{param.value, {}, {}, &param, true});
  const int id = static_cast<int>(nodes_.size()) - 1;
  bound_.emplace(&param, id);
  return Var(this, id);
}

Var Tape::record(Matrix value, std::span<const Var> parents, Backprop backprop) {
  bool needs = false;
  for (const auto& p : parents) needs = needs || nodes_[p.id()].requires_grad;
  nodes_.push_back(Node{std::move(value), {}, needs ? std::move(backprop) : Backprop{}, nullptr, needs});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Matrix& Tape::grad(const Var& v) {
  Node& node = nodes_[v.id()];
  if (node.grad.size() == 0 && node.value.size() != 0) node.grad.setZero(node.value.rows(), node.value.cols());
  return node.grad;
}

void Tape::backward(const Var& output) {
  if (output.rows() != 1 || output.cols() != 1) throw DimensionError("backward needs a 1x1 output");
  grad(output)(0, 0) += 1.0;
  for (int id = output.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.size() == 0) continue;
    if (node.param != nullptr)
      node.param->grad += node.grad;
    else if (node.backprop)
      node.backprop(*this, node.grad, node.value);
  }
}

Var matmul(const Var& a, const Var& b) {
  require(a.cols() == b.rows(), "matmul", a.value(), b.value());
  Tape& t = *a.tape();
  const Var parents[] = {a, b};
  return t.record(a.value() * b.value(), parents, [a, b](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, a, g * b.value().transpose());
    accumulate(t, b, a.value().transpose() * g);
  });
}

Var add(const Var& a, const Var& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add", a.value(), b.value());
  const Var parents[] = {a, b};
  return a.tape()->record(a.value() + b.value(), parents, [a, b](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, a, g);
    accumulate(t, b, g);
  });
}

Var sub(const Var& a, const Var& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub", a.value(), b.value());
  const Var parents[] = {a, b};
  return a.tape()->record(a.value() - b.value(), parents, [a, b](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, a, g);
    accumulate(t, b, -g);
  });
}

Var mul(const Var& a, const Var& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "mul", a.value(), b.value());
  const Var parents[] = {a, b};
  return a.tape()->record(a.value().cwiseProduct(b.value()), parents, [a, b](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, a, g.cwiseProduct(b.value()));
    accumulate(t, b, g.cwiseProduct(a.value()));
  });
}

Var add_bias(const Var& a, const Var& column) {
  require(column.cols() == 1 && column.rows() == a.rows(), "add_bias", a.value(), column.value());
  const Var parents[] = {a, column};
  Matrix out = a.value().colwise() + column.value().col(0);
  return a.tape()->record(std::move(out), parents, [a, column](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, a, g);
    accumulate(t, column, g.rowwise().sum());
  });
}

Var scale(const Var& a, double s) {
  const Var parents[] = {a};
  return a.tape()->record(a.value() * s, parents, [a, s](Tape& t, const Matrix& g, const Matrix&) { accumulate(t, a, g * s); });
}

Var one_minus(const Var& a) {
  const Var parents[] = {a};
  return a.tape()->record((1.0 - a.value().array()).matrix(), parents,
                          [a](Tape& t, const Matrix& g, const Matrix&) { accumulate(t, a, -g); });
}

Var sigmoid(const Var& a) {
  const Var parents[] = {a};
  return a.tape()->record(sigmoid_of(a.value()), parents, [a](Tape& t, const Matrix& g, const Matrix& s) {
    accumulate(t, a, g.cwiseProduct(s.cwiseProduct((1.0 - s.array()).matrix())));
  });
}

Var tanh(const Var& a) {
  const Var parents[] = {a};
  return a.tape()->record(a.value().array().tanh().matrix(), parents,
                          [a](Tape& t, const Matrix& g, const Matrix& y) {
                            accumulate(t, a, g.cwiseProduct((1.0 - y.array().square()).matrix()));
                          });
}

Var transpose(const Var& a) {
  const Var parents[] = {a};
  return a.tape()->record(a.value().transpose(), parents,
                          [a](Tape& t, const Matrix& g, const Matrix&) { accumulate(t, a, g.transpose()); });
}

Var concat_rows(const Var& top, const Var& bottom) {
  require(top.cols() == bottom.cols(), "concat_rows", top.value(), bottom.value());
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top.value(), bottom.value();
  const Var parents[] = {top, bottom};
  const Eigen::Index split = top.rows();
  return top.tape()->record(std::move(out), parents, [top, bottom, split](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, top, g.topRows(split));
    accumulate(t, bottom, g.bottomRows(g.rows() - split));
  });
}

Var hcat(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("hcat of nothing");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    require(p.rows() == rows, "hcat", parts[0].value(), p.value());
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return parts[0].tape()->record(std::move(out), parts, [saved](Tape& t, const Matrix& g, const Matrix&) {
    Eigen::Index at = 0;
    for (const auto& p : saved) {
      accumulate(t, p, g.middleCols(at, p.cols()));
      at += p.cols();
    }
  });
}

Var columns(const Var& a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) throw DimensionError("columns: range out of bounds");
  const Var parents[] = {a};
  return a.tape()->record(a.value().middleCols(start, count), parents, [a, start, count](Tape& t, const Matrix& g, const Matrix&) {
    if (t.requires_grad(a)) t.grad(a).middleCols(start, count) += g;
  });
}

Var gather_columns(const Var& a, std::span<const int> index) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= a.cols()) throw DimensionError("gather_columns: index out of range");
    out.col(static_cast<Eigen::Index>(k)) = a.value().col(index[k]);
  }
  std::vector<int> idx(index.begin(), index.end());
  const Var parents[] = {a};
  return a.tape()->record(std::move(out), parents, [a, idx](Tape& t, const Matrix& g, const Matrix&) {
    if (!t.requires_grad(a)) return;
    Matrix& ga = t.grad(a);
    for (std::size_t k = 0; k < idx.size(); ++k) ga.col(idx[k]) += g.col(static_cast<Eigen::Index>(k));
  });
}

Var scatter_add_columns(const Var& a, std::span<const int> index, Eigen::Index num_cols) {
  if (static_cast<Eigen::Index>(index.size()) != a.cols()) throw DimensionError("scatter_add_columns: index size");
  Matrix out = Matrix::Zero(a.rows(), num_cols);
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= num_cols) throw DimensionError("scatter_add_columns: index out of range");
    out.col(index[k]) += a.value().col(static_cast<Eigen::Index>(k));
  }
  std::vector<int> idx(index.begin(), index.end());
  const Var parents[] = {a};
  return a.tape()->record(std::move(out), parents, [a, idx](Tape& t, const Matrix& g, const Matrix&) {
    if (!t.requires_grad(a)) return;
    Matrix& ga = t.grad(a);
    for (std::size_t k = 0; k < idx.size(); ++k) ga.col(static_cast<Eigen::Index>(k)) += g.col(idx[k]);
  });
}

Var softmax(const Var& a) {
  if (a.value().size() == 0) throw DimensionError("softmax of empty input");
  const double mx = a.value().maxCoeff();
  Matrix e = (a.value().array() - mx).exp().matrix();
  e /= e.sum();
  const Var parents[] = {a};
  return a.tape()->record(std::move(e), parents, [a](Tape& t, const Matrix& g, const Matrix& s) {
    const double inner = g.cwiseProduct(s).sum();
    accumulate(t, a, s.cwiseProduct((g.array() - inner).matrix()));
  });
}

Var sum(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  const Var parents[] = {a};
  return a.tape()->record(std::move(out), parents, [a](Tape& t, const Matrix& g, const Matrix&) {
    if (t.requires_grad(a)) t.grad(a).array() += g(0, 0);
  });
}

Var squared_norm(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().squaredNorm();
  const Var parents[] = {a};
  return a.tape()->record(std::move(out), parents,
                          [a](Tape& t, const Matrix& g, const Matrix&) { accumulate(t, a, 2.0 * g(0, 0) * a.value()); });
}

Var add_scalars(std::span<const Var> scalars) {
  if (scalars.empty()) throw DimensionError("add_scalars of nothing");
  Matrix out = Matrix::Zero(1, 1);
  for (const auto& s : scalars) {
    if (s.rows() != 1 || s.cols() != 1) throw DimensionError("add_scalars: non-scalar input");
    out(0, 0) += s.value()(0, 0);
  }
  std::vector<Var> saved(scalars.begin(), scalars.end());
  return scalars[0].tape()->record(std::move(out), scalars, [saved](Tape& t, const Matrix& g, const Matrix&) {
    for (const auto& s : saved) accumulate(t, s, g);
  });
}

Var bce_with_logits_sum(const Var& logits, const Matrix& targets) {
  require(logits.rows() == targets.rows() && logits.cols() == targets.cols(), "bce", logits.value(), targets);
  const auto& z = logits.value().array();
  const auto& y = targets.array();
  Matrix out(1, 1);
  out(0, 0) = (z.max(0.0) - z * y + (-z.abs()).exp().log1p()).sum();
  const Var parents[] = {logits};
  return logits.tape()->record(std::move(out), parents, [logits, targets](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, logits, g(0, 0) * (sigmoid_of(logits.value()) - targets));
  });
}

Var linear_edge_loss_sum(const Var& logits, const Matrix& targets) {
  require(logits.rows() == targets.rows() && logits.cols() == targets.cols(), "linear loss", logits.value(),
          targets);
  Matrix p = sigmoid_of(logits.value());
  Matrix out(1, 1);
  out(0, 0) = (targets.array() + p.array() * (1.0 - 2.0 * targets.array())).sum();
  const Var parents[] = {logits};
  return logits.tape()->record(std::move(out), parents, [logits, targets, p](Tape& t, const Matrix& g, const Matrix&) {
    accumulate(t, logits,
               (g(0, 0) * p.array() * (1.0 - p.array()) * (1.0 - 2.0 * targets.array())).matrix());
  });
}

Var squared_error_sum(const Var& a, const Matrix& target) {
  require(a.rows() == target.rows() && a.cols() == target.cols(), "squared_error", a.value(), target);
  Matrix diff = a.value() - target;
  Matrix out(1, 1);
  out(0, 0) = diff.squaredNorm();
  const Var parents[] = {a};
  return a.tape()->record(std::move(out), parents,
                          [a, diff](Tape& t, const Matrix& g, const Matrix&) { accumulate(t, a, 2.0 * g(0, 0) * diff); });
}

}  // namespace evonet::ad
