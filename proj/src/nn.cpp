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

#include "evonet/nn.hpp"

#include <cmath>

#include "evonet/errors.hpp"

namespace evonet::nn {

using nlohmann::json;

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& m) { return m.unaryExpr([](double x) { return sigmoid(x); }); }

ad::Parameter& ParamStore::create(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                                  std::mt19937_64& rng, double bound) {
  auto [it, inserted] = params_.try_emplace(name);
  if (!inserted) throw ConfigError("parameter '" + name + "' created twice");
  ad::Parameter& p = it->second;
  p.value.resize(rows, cols);
  std::uniform_real_distribution<double> dist(-bound, bound);
  // Row-major fill so the draw order matches the checkpoint layout.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) p.value(r, c) = bound > 0 ? dist(rng) : 0.0;
  p.zero_grad();
  return p;
}

ad::Parameter& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter '" + name + "'");
  return it->second;
}

const ad::Parameter& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter '" + name + "'");
  return it->second;
}

void ParamStore::zero_grad() {
  for (auto& [name, p] : params_) p.zero_grad();
}

double ParamStore::grad_norm() const {
  double total = 0;
  for (const auto& [name, p] : params_) total += p.grad.squaredNorm();
  return std::sqrt(total);
}

std::size_t ParamStore::num_scalars() const {
  std::size_t total = 0;
  for (const auto& [name, p] : params_) total += static_cast<std::size_t>(p.value.size());
  return total;
}

json ParamStore::to_json() const {
  json out = json::object();
  for (const auto& [name, p] : params_) {
    json data = json::array();
    for (Eigen::Index r = 0; r < p.value.rows(); ++r)
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) data.push_back(p.value(r, c));
    out[name] = {{"shape", {p.value.rows(), p.value.cols()}}, {"data", std::move(data)}};
  }
  return out;
}

void ParamStore::load_json(const json& j) {
  if (!j.is_object()) throw DataError("checkpoint parameters must be an object");
  if (j.size() != params_.size()) throw DataError("checkpoint parameter count does not match the model");
  for (auto& [name, p] : params_) {
    if (!j.contains(name)) throw DataError("checkpoint is missing parameter '" + name + "'");
    const auto& entry = j.at(name);
    const auto rows = entry.at("shape").at(0).get<Eigen::Index>();
    const auto cols = entry.at("shape").at(1).get<Eigen::Index>();
    if (rows != p.value.rows() || cols != p.value.cols())
      throw DataError("checkpoint shape mismatch for '" + name + "'");
    const auto& data = entry.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw DataError("checkpoint data size mismatch for '" + name + "'");
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) p.value(r, c) = data[k++].get<double>();
    p.zero_grad();
  }
}

Linear Linear::create(ParamStore& store, const std::string& name, int in, int out, bool with_bias,
                      std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max(in, 1)));
  Linear l;
  l.weight = &store.create(name + "/W", out, in, rng, bound);
  if (with_bias) l.bias = &store.create(name + "/b", out, 1, rng, 0.0);
  return l;
}

Var Linear::forward(ad::Tape& tape, const Var& x) const {
  Var y = ad::matmul(tape.parameter(*weight), x);
  return bias ? ad::add_bias(y, tape.parameter(*bias)) : y;
}

Matrix Linear::eval(const Matrix& x) const {
  Matrix y = weight->value * x;
  if (bias) y.colwise() += bias->value.col(0);
  return y;
}

Mlp Mlp::create(ParamStore& store, const std::string& name, const std::vector<int>& widths, std::mt19937_64& rng) {
  if (widths.size() < 2) throw ConfigError("an MLP needs at least input and output widths");
  Mlp mlp;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k)
    mlp.layers.push_back(Linear::create(store, name + "/" + std::to_string(k), widths[k], widths[k + 1], true, rng));
  return mlp;
}

Var Mlp::forward(ad::Tape& tape, const Var& x) const {
  Var h = x;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    h = layers[k].forward(tape, h);
    if (k + 1 < layers.size()) h = ad::tanh(h);
  }
  return h;
}

Matrix Mlp::eval(const Matrix& x) const {
  Matrix h = x;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    h = layers[k].eval(h);
    if (k + 1 < layers.size()) h = h.array().tanh().matrix();
  }
  return h;
}

GruCell GruCell::create(ParamStore& store, const std::string& name, int in, int hidden, bool with_bias,
                        std::mt19937_64& rng) {
  const double bw = 1.0 / std::sqrt(static_cast<double>(std::max(in, 1)));
  const double bu = 1.0 / std::sqrt(static_cast<double>(hidden));
  GruCell g;
  g.w_r = &store.create(name + "/W_R", hidden, in, rng, bw);
  g.u_r = &store.create(name + "/U_R", hidden, hidden, rng, bu);
  g.w_z = &store.create(name + "/W_Z", hidden, in, rng, bw);
  g.u_z = &store.create(name + "/U_Z", hidden, hidden, rng, bu);
  g.w = &store.create(name + "/W", hidden, in, rng, bw);
  g.u = &store.create(name + "/U", hidden, hidden, rng, bu);
  if (with_bias) {
    g.b_r = &store.create(name + "/b_R", hidden, 1, rng, 0.0);
    g.b_z = &store.create(name + "/b_Z", hidden, 1, rng, 0.0);
    g.b = &store.create(name + "/b", hidden, 1, rng, 0.0);
  }
  return g;
}

namespace {

Var affine(ad::Tape& tape, ad::Parameter* w, ad::Parameter* b, const Var& x) {
  Var y = ad::matmul(tape.parameter(*w), x);
  return b ? ad::add_bias(y, tape.parameter(*b)) : y;
}

Matrix affine(const ad::Parameter* w, const ad::Parameter* b, const Matrix& x) {
  Matrix y = w->value * x;
  if (b) y.colwise() += b->value.col(0);
  return y;
}

void check_rows(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) + " rows, got " +
                         std::to_string(got));
}

}  // namespace

GruCell::Projection GruCell::project(ad::Tape& tape, const Var& x) const {
  check_rows(x.rows(), input_dim(), "GRU input");
  return {affine(tape, w_r, b_r, x), affine(tape, w_z, b_z, x), affine(tape, w, b, x)};
}

Var GruCell::step(ad::Tape& tape, const Projection& x, const Var& h) const {
  check_rows(h.rows(), hidden_dim(), "GRU state");
  Var r = ad::sigmoid(ad::add(x.r, ad::matmul(tape.parameter(*u_r), h)));
  Var z = ad::sigmoid(ad::add(x.z, ad::matmul(tape.parameter(*u_z), h)));
  Var cand = ad::tanh(ad::add(x.h, ad::matmul(tape.parameter(*u), ad::mul(r, h))));
  return ad::add(ad::mul(ad::one_minus(z), h), ad::mul(z, cand));
}

GruCell::PlainProjection GruCell::project(const Matrix& x) const {
  check_rows(x.rows(), input_dim(), "GRU input");
  return {affine(w_r, b_r, x), affine(w_z, b_z, x), affine(w, b, x)};
}

Matrix GruCell::step(const PlainProjection& x, const Matrix& h) const {
  check_rows(h.rows(), hidden_dim(), "GRU state");
  Matrix r = sigmoid(x.r + u_r->value * h);
  Matrix z = sigmoid(x.z + u_z->value * h);
  Matrix cand = (x.h + u->value * r.cwiseProduct(h)).array().tanh().matrix();
  return (1.0 - z.array()).matrix().cwiseProduct(h) + z.cwiseProduct(cand);
}

LstmCell LstmCell::create(ParamStore& store, const std::string& name, int in, int hidden, std::mt19937_64& rng) {
  const double bw = 1.0 / std::sqrt(static_cast<double>(std::max(in, 1)));
  const double bu = 1.0 / std::sqrt(static_cast<double>(hidden));
  LstmCell l;
  auto gate = [&](const char* tag, ad::Parameter*& w, ad::Parameter*& u, ad::Parameter*& b) {
    w = &store.create(name + "/W_" + tag, hidden, in, rng, bw);
    u = &store.create(name + "/U_" + tag, hidden, hidden, rng, bu);
    b = &store.create(name + "/b_" + tag, hidden, 1, rng, 0.0);
  };
  gate("i", l.w_i, l.u_i, l.b_i);
  gate("f", l.w_f, l.u_f, l.b_f);
  gate("o", l.w_o, l.u_o, l.b_o);
  gate("g", l.w_g, l.u_g, l.b_g);
  return l;
}

LstmCell::State LstmCell::zero_state(ad::Tape& tape, Eigen::Index batch) const {
  return {tape.constant(Matrix::Zero(hidden_dim(), batch)), tape.constant(Matrix::Zero(hidden_dim(), batch))};
}

LstmCell::State LstmCell::step(ad::Tape& tape, const State& s, const Var& x) const {
  check_rows(x.rows(), input_dim(), "LSTM input");
  check_rows(s.h.rows(), hidden_dim(), "LSTM state");
  auto pre = [&](ad::Parameter* w, ad::Parameter* u, ad::Parameter* b) {
    return ad::add(affine(tape, w, b, x), ad::matmul(tape.parameter(*u), s.h));
  };
  Var i = ad::sigmoid(pre(w_i, u_i, b_i));
  Var f = ad::sigmoid(pre(w_f, u_f, b_f));
  Var o = ad::sigmoid(pre(w_o, u_o, b_o));
  Var g = ad::tanh(pre(w_g, u_g, b_g));
  Var c = ad::add(ad::mul(f, s.c), ad::mul(i, g));
  return {ad::mul(o, ad::tanh(c)), c};
}

LstmCell::PlainState LstmCell::step(const PlainState& s, const Matrix& x) const {
  check_rows(x.rows(), input_dim(), "LSTM input");
  check_rows(s.h.rows(), hidden_dim(), "LSTM state");
  auto pre = [&](ad::Parameter* w, ad::Parameter* u, ad::Parameter* b) -> Matrix {
    return affine(w, b, x) + u->value * s.h;
  };
  Matrix i = sigmoid(pre(w_i, u_i, b_i));
  Matrix f = sigmoid(pre(w_f, u_f, b_f));
  Matrix o = sigmoid(pre(w_o, u_o, b_o));
  Matrix g = pre(w_g, u_g, b_g).array().tanh().matrix();
  Matrix c = f.cwiseProduct(s.c) + i.cwiseProduct(g);
  return {o.cwiseProduct(c.array().tanh().matrix()), c};
}

}  // namespace evonet::nn
