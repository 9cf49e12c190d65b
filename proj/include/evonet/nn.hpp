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

// Parameter storage and the recurrent / feed-forward cells shared by the
// encoder, predictor and decoder. Every cell has a taped forward (training,
// gradient checks) and a plain Eigen evaluation (autoregressive sampling).

#include <Eigen/Dense>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evonet/autodiff.hpp"
#include "json.hpp"

namespace evonet::nn {

using ad::Matrix;
using ad::Var;
using Vector = Eigen::VectorXd;

double sigmoid(double x);
Matrix sigmoid(const Matrix& m);

/// Named parameter tensors. Element addresses are stable for the store's
/// lifetime (std::map nodes), so cells keep raw pointers into it.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;
  ParamStore(ParamStore&&) = default;
  ParamStore& operator=(ParamStore&&) = default;

  /// Uniform(-bound, bound) initialisation; bound 0 gives zeros.
  ad::Parameter& create(const std::string& name, Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                        double bound);
  ad::Parameter& at(const std::string& name);
  const ad::Parameter& at(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.contains(name); }

  std::map<std::string, ad::Parameter>& entries() { return params_; }
  const std::map<std::string, ad::Parameter>& entries() const { return params_; }

  void zero_grad();
  double grad_norm() const;
  std::size_t num_scalars() const;

  /// {"name": {"shape": [r, c], "data": [row-major]}}
  nlohmann::json to_json() const;
  /// Shapes must match the already-created parameters.
  void load_json(const nlohmann::json& j);

 private:
  std::map<std::string, ad::Parameter> params_;
};

struct Linear {
  ad::Parameter* weight = nullptr;
  ad::Parameter* bias = nullptr;  // optional

  static Linear create(ParamStore& store, const std::string& name, int in, int out, bool with_bias,
                       std::mt19937_64& rng);
  Var forward(ad::Tape& tape, const Var& x) const;
  Matrix eval(const Matrix& x) const;
  int in_dim() const { return static_cast<int>(weight->value.cols()); }
  int out_dim() const { return static_cast<int>(weight->value.rows()); }
};

/// tanh hidden layers, linear output layer.
struct Mlp {
  std::vector<Linear> layers;

  static Mlp create(ParamStore& store, const std::string& name, const std::vector<int>& widths,
                    std::mt19937_64& rng);
  Var forward(ad::Tape& tape, const Var& x) const;
  Matrix eval(const Matrix& x) const;
};

/// r = s(W_r x + U_r h), z = s(W_z x + U_z h), c = tanh(W x + U (r * h)),
/// h' = (1 - z) * h + z * c, with optional biases on the three pre-activations.
struct GruCell {
  ad::Parameter *w_r = nullptr, *u_r = nullptr, *w_z = nullptr, *u_z = nullptr, *w = nullptr, *u = nullptr;
  ad::Parameter *b_r = nullptr, *b_z = nullptr, *b = nullptr;

  struct Projection {
    Var r, z, h;
  };
  struct PlainProjection {
    Matrix r, z, h;
  };

  static GruCell create(ParamStore& store, const std::string& name, int in, int hidden, bool with_bias,
                        std::mt19937_64& rng);
  int hidden_dim() const { return static_cast<int>(u->value.rows()); }
  int input_dim() const { return static_cast<int>(w->value.cols()); }

  /// Input half of the pre-activations, W x + b, for a batch of columns.
  Projection project(ad::Tape& tape, const Var& x) const;
  Var step(ad::Tape& tape, const Projection& x, const Var& h) const;
  Var forward(ad::Tape& tape, const Var& x, const Var& h) const { return step(tape, project(tape, x), h); }

  PlainProjection project(const Matrix& x) const;
  Matrix step(const PlainProjection& x, const Matrix& h) const;
  Matrix eval(const Matrix& x, const Matrix& h) const { return step(project(x), h); }
};

struct LstmCell {
  ad::Parameter *w_i = nullptr, *u_i = nullptr, *b_i = nullptr;
  ad::Parameter *w_f = nullptr, *u_f = nullptr, *b_f = nullptr;
  ad::Parameter *w_o = nullptr, *u_o = nullptr, *b_o = nullptr;
  ad::Parameter *w_g = nullptr, *u_g = nullptr, *b_g = nullptr;

  struct State {
    Var h, c;
  };
  struct PlainState {
    Matrix h, c;
  };

  static LstmCell create(ParamStore& store, const std::string& name, int in, int hidden, std::mt19937_64& rng);
  int hidden_dim() const { return static_cast<int>(u_i->value.rows()); }
  int input_dim() const { return static_cast<int>(w_i->value.cols()); }

  State zero_state(ad::Tape& tape, Eigen::Index batch = 1) const;
  State step(ad::Tape& tape, const State& state, const Var& x) const;
  PlainState step(const PlainState& state, const Matrix& x) const;
};

}  // namespace evonet::nn
