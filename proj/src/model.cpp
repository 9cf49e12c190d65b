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

#include "evonet/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "evonet/errors.hpp"

namespace evonet {

using nlohmann::json;
using nn::Matrix;
using nn::Var;
using nn::Vector;

namespace {

std::string optimizer_name(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer '" + s + "'");
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

const std::vector<std::string>& ModelConfig::keys() {
  static const std::vector<std::string> k = {
      "hidden_dim", "depth_K",    "tie_weights",      "set2set_steps",  "window_size", "max_nodes",
      "size_hidden", "edge_attr_dim", "loss_form",    "optimizer",      "epochs",      "step_size",
      "size_loss_weight", "split_fraction", "validation", "seed"};
  return k;
}

json ModelConfig::to_json() const {
  return {{"hidden_dim", hidden_dim},
          {"depth_K", depth_K},
          {"tie_weights", tie_weights},
          {"set2set_steps", set2set_steps},
          {"window_size", window_size},
          {"max_nodes", max_nodes},
          {"size_hidden", size_hidden},
          {"edge_attr_dim", edge_attr_dim},
          {"loss_form", loss_form == LossForm::bce ? "bce" : "literal"},
          {"optimizer", optimizer_name(optimizer)},
          {"epochs", epochs},
          {"step_size", step_size},
          {"size_loss_weight", size_loss_weight},
          {"split_fraction", split_fraction},
          {"validation", validation},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(keys().begin(), keys().end(), key) == keys().end())
      throw ConfigError("unknown config key '" + key + "'");
  ModelConfig c;
  read_key(j, "hidden_dim", c.hidden_dim);
  read_key(j, "depth_K", c.depth_K);
  read_key(j, "tie_weights", c.tie_weights);
  read_key(j, "set2set_steps", c.set2set_steps);
  read_key(j, "window_size", c.window_size);
  read_key(j, "max_nodes", c.max_nodes);
  read_key(j, "size_hidden", c.size_hidden);
  read_key(j, "edge_attr_dim", c.edge_attr_dim);
  std::string loss = c.loss_form == LossForm::bce ? "bce" : "literal";
  read_key(j, "loss_form", loss);
  c.loss_form = parse_loss_form(loss);
  std::string opt = optimizer_name(c.optimizer);
  read_key(j, "optimizer", opt);
  c.optimizer = parse_optimizer(opt);
  read_key(j, "epochs", c.epochs);
  read_key(j, "step_size", c.step_size);
  read_key(j, "size_loss_weight", c.size_loss_weight);
  read_key(j, "split_fraction", c.split_fraction);
  read_key(j, "validation", c.validation);
  read_key(j, "seed", c.seed);
  if (c.hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (c.depth_K < 1) throw ConfigError("depth_K must be >= 1");
  if (c.window_size < 1) throw ConfigError("window_size must be >= 1");
  if (c.max_nodes < 2) throw ConfigError("max_nodes must be >= 2");
  if (c.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(c.step_size > 0)) throw ConfigError("step_size must be positive");
  if (!(c.split_fraction > 0 && c.split_fraction < 1)) throw ConfigError("split_fraction must be in (0,1)");
  return c;
}

SplitPlan plan_split(std::size_t length, int window, double fraction, bool validation) {
  if (window < 1) throw ConfigError("window must be >= 1");
  if (!(fraction > 0 && fraction < 1)) throw ConfigError("split_fraction must be in (0,1)");
  if (length <= static_cast<std::size_t>(window) + 1)
    throw DataError("sequence of length " + std::to_string(length) + " is too short for window " +
                    std::to_string(window));
  SplitPlan plan;
  plan.train_end = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(length)));
  plan.train_end = std::clamp<std::size_t>(plan.train_end, window + 1, length - 1);
  for (std::size_t t = window; t < plan.train_end; ++t) plan.train_targets.push_back(t);
  for (std::size_t t = plan.train_end; t < length; ++t) plan.test_targets.push_back(t);
  if (validation) {
    std::size_t held = plan.train_targets.size() / 10;
    if (held > 0 && held < plan.train_targets.size()) {
      plan.validation_targets.assign(plan.train_targets.end() - static_cast<std::ptrdiff_t>(held),
                                     plan.train_targets.end());
      plan.train_targets.resize(plan.train_targets.size() - held);
    }
  }
  return plan;
}

std::vector<SizePoint> size_history(const GraphSequence& seq, std::size_t begin, std::size_t end) {
  std::vector<SizePoint> h;
  for (std::size_t t = begin; t < end; ++t) h.emplace_back(seq.graphs[t].num_nodes(), seq.graphs[t].num_edges());
  return h;
}

Model::Model(const ModelConfig& cfg) : cfg_(cfg) {
  std::mt19937_64 rng(cfg.seed);
  encoder_ = Encoder::create(store_, {cfg.hidden_dim, cfg.depth_K, cfg.tie_weights, cfg.set2set_steps, cfg.edge_attr_dim},
                             rng);
  predictor_ = Predictor::create(store_, {2 * cfg.hidden_dim, cfg.window_size, cfg.size_hidden}, rng);
  decoder_ = Decoder::create(store_, {2 * cfg.hidden_dim, cfg.max_nodes}, rng);
}

void Model::check_target(const GraphSequence& seq, std::size_t target) const {
  if (target < static_cast<std::size_t>(cfg_.window_size) || target >= seq.size())
    throw DataError("target index " + std::to_string(target) + " has no full history window");
}

Model::WindowLoss Model::window_loss(ad::Tape& tape, const GraphSequence& seq, std::size_t target) const {
  check_target(seq, target);
  const std::size_t begin = target - cfg_.window_size;
  std::vector<Var> embeddings;
  embeddings.reserve(cfg_.window_size);
  for (std::size_t t = begin; t < target; ++t) embeddings.push_back(encoder_.encode(tape, seq.graphs[t]));
  Var predicted = predictor_.predict_embedding(tape, embeddings);
  Var edges = decoder_.loss(tape, predicted, to_adjacency_sequence(seq.graphs[target], seq.registry), cfg_.loss_form);

  const auto window = size_history(seq, begin, target);
  Var size_out = predictor_.size_output(tape, window, scales_);
  Matrix size_target(1, 1);
  size_target(0, 0) = (seq.graphs[target].num_nodes() - window.back().first) / scales_.nodes;
  Var size = ad::squared_error_sum(size_out, size_target);
  const Var parts[] = {edges, ad::scale(size, cfg_.size_loss_weight)};
  return {ad::add_scalars(parts), edges, size};
}

Vector Model::predicted_embedding(const GraphSequence& seq, std::size_t target) const {
  check_target(seq, target);
  std::vector<Vector> embeddings;
  for (std::size_t t = target - cfg_.window_size; t < target; ++t) embeddings.push_back(encoder_.encode(seq.graphs[t]));
  return predictor_.predict_embedding(embeddings);
}

Prediction Model::predict(const GraphSequence& seq, std::size_t target, EdgeSampler& sampler) const {
  Prediction p;
  p.embedding = predicted_embedding(seq, target);
  const auto window = size_history(seq, target - cfg_.window_size, target);
  p.predicted_nodes = std::min(predictor_.predict_size(window, scales_), cfg_.max_nodes);
  p.graph = assign_degree_attributes(sample_graph(decoder_, p.embedding, p.predicted_nodes, sampler));
  return p;
}

json Model::checkpoint() const {
  return {{"config", cfg_.to_json()},
          {"size_scales", {{"nodes", scales_.nodes}, {"edges", scales_.edges}}},
          {"params", store_.to_json()}};
}

Model Model::from_checkpoint(const json& j) {
  try {
    Model m(ModelConfig::from_json(j.at("config")));
    m.scales_.nodes = j.at("size_scales").at("nodes").get<double>();
    m.scales_.edges = j.at("size_scales").at("edges").get<double>();
    m.store_.load_json(j.at("params"));
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void Optimizer::step(nn::ParamStore& store) {
  ++t_;
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  for (auto& [name, p] : store.entries()) {
    if (kind_ == OptimizerKind::sgd) {
      p.value -= step_ * p.grad;
      continue;
    }
    auto& mom = moments_[name];
    if (mom.m.size() == 0) {
      mom.m.setZero(p.value.rows(), p.value.cols());
      mom.v.setZero(p.value.rows(), p.value.cols());
    }
    mom.m = beta1 * mom.m + (1 - beta1) * p.grad;
    mom.v = beta2 * mom.v + (1 - beta2) * p.grad.cwiseAbs2();
    const double c1 = 1 - std::pow(beta1, static_cast<double>(t_));
    const double c2 = 1 - std::pow(beta2, static_cast<double>(t_));
    p.value.array() -= step_ * (mom.m.array() / c1) / ((mom.v.array() / c2).sqrt() + eps);
  }
}

namespace {

double mean_loss(const Model& model, const GraphSequence& seq, const std::vector<std::size_t>& targets) {
  if (targets.empty()) return 0;
  double total = 0;
  for (auto t : targets) {
    ad::Tape tape;
    total += model.window_loss(tape, seq, t).total.value()(0, 0);
  }
  return total / static_cast<double>(targets.size());
}

}  // namespace

TrainReport train(Model& model, const GraphSequence& seq, std::ostream* log) {
  const auto& cfg = model.config();
  if (seq.size() <= static_cast<std::size_t>(cfg.window_size) + 1)
    throw DataError("sequence length must exceed window_size + 1");
  const auto plan = plan_split(seq.size(), cfg.window_size, cfg.split_fraction, cfg.validation);
  model.set_size_scales(fit_size_scales(size_history(seq, 0, plan.train_end)));

  TrainReport report;
  report.initial_loss = mean_loss(model, seq, plan.train_targets);
  Optimizer opt(cfg.optimizer, cfg.step_size);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  auto order = plan.train_targets;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0;
    for (auto t : order) {
      ad::Tape tape;
      model.params().zero_grad();
      auto loss = model.window_loss(tape, seq, t);
      const double value = loss.total.value()(0, 0);
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-finite training loss at epoch " << epoch << ", target " << t << " (edge loss "
            << loss.edges.value()(0, 0) << ", size loss " << loss.size.value()(0, 0) << ")";
        throw NumericError(msg.str());
      }
      tape.backward(loss.total);
      if (!std::isfinite(model.params().grad_norm()))
        throw NumericError("non-finite gradient at epoch " + std::to_string(epoch) + ", target " + std::to_string(t));
      opt.step(model.params());
      total += value;
    }
    report.epoch_loss.push_back(total / static_cast<double>(order.size()));
    if (!plan.validation_targets.empty()) report.validation_loss.push_back(mean_loss(model, seq, plan.validation_targets));
    if (log) {
      *log << "epoch " << epoch + 1 << "/" << cfg.epochs << " loss " << std::setprecision(6)
           << report.epoch_loss.back();
      if (!report.validation_loss.empty()) *log << " validation " << report.validation_loss.back();
      *log << "\n" << std::flush;
    }
  }
  return report;
}

}  // namespace evonet
