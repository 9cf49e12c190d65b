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

#include "evonet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "evonet/errors.hpp"

namespace evonet {

LabelRule parse_label_rule(const std::string& s) {
  if (s == "degree") return LabelRule::degree;
  if (s == "binned_attribute" || s == "binned-attribute") return LabelRule::binned_attribute;
  throw ConfigError("unknown label rule: " + s);
}

std::string to_string(LabelRule r) { return r == LabelRule::degree ? "degree" : "binned_attribute"; }

static void check_config(const WLConfig& cfg) {
  if (cfg.iterations < 0) throw ConfigError("WL iterations must be >= 0");
  if (cfg.label_rule == LabelRule::binned_attribute && !(cfg.bin_width > 0))
    throw ConfigError("WL bin width must be positive");
}

std::vector<std::int64_t> initial_labels(const Graph& g, const WLConfig& cfg) {
  check_config(cfg);
  std::vector<std::int64_t> labels(g.num_nodes());
  if (cfg.label_rule == LabelRule::degree) {
    for (int i = 0; i < g.num_nodes(); ++i) labels[i] = g.degree(i);
    return labels;
  }
  if (g.node_attr_dim() < 1) throw DataError("binned_attribute labels need a node attribute");
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double x = g.node_attrs()(i, 0);
    if (!std::isfinite(x)) throw DataError("non-finite node attribute");
    labels[i] = static_cast<std::int64_t>(std::llround(x / cfg.bin_width));
  }
  return labels;
}

kernels::LabelCounts WLDictionary::features(const Graph& g, const WLConfig& cfg) {
  auto intern = [this](int round, std::vector<std::int64_t> key) {
    auto [it, inserted] =
        table_.try_emplace({round, std::move(key)}, static_cast<std::int64_t>(table_.size()));
    return it->second;
  };
  kernels::LabelCounts counts;
  std::vector<std::int64_t> labels = initial_labels(g, cfg);
  for (auto& l : labels) {
    l = intern(0, {l});
    ++counts[l];
  }
  std::vector<std::int64_t> next(labels.size());
  for (int r = 1; r <= cfg.iterations; ++r) {
    for (int v = 0; v < g.num_nodes(); ++v) {
      std::vector<std::int64_t> key;
      key.reserve(g.degree(v) + 1);
      for (int u : g.neighbors()[v]) key.push_back(labels[u]);
      std::sort(key.begin(), key.end());
      key.insert(key.begin(), labels[v]);
      next[v] = intern(r, std::move(key));
      ++counts[next[v]];
    }
    labels.swap(next);
  }
  return counts;
}

static void require_nonempty(const Graph& g) {
  if (g.num_nodes() == 0) throw DataError("WL kernel of an empty graph");
}

static double normalized(std::int64_t k12, std::int64_t k11, std::int64_t k22) {
  // k11, k22 >= number of nodes > 0.
  return std::clamp(static_cast<double>(k12) /
                        std::sqrt(static_cast<double>(k11) * static_cast<double>(k22)),
                    0.0, 1.0);
}

std::int64_t wl_kernel_count(const Graph& g1, const Graph& g2, const WLConfig& cfg) {
  WLDictionary dict;
  const auto f1 = dict.features(g1, cfg);
  const auto f2 = dict.features(g2, cfg);
  return kernels::dot(f1, f2);
}

double wl_subtree_kernel(const Graph& g1, const Graph& g2, const WLConfig& cfg) {
  require_nonempty(g1);
  require_nonempty(g2);
  WLDictionary dict;
  const auto f1 = dict.features(g1, cfg);
  const auto f2 = dict.features(g2, cfg);
  return normalized(kernels::dot(f1, f2), kernels::dot(f1, f1), kernels::dot(f2, f2));
}

Eigen::MatrixXd wl_gram(std::span<const Graph> graphs, const WLConfig& cfg, kernels::Exec exec) {
  WLDictionary dict;
  std::vector<kernels::LabelCounts> feats;
  feats.reserve(graphs.size());
  for (const auto& g : graphs) {
    require_nonempty(g);
    feats.push_back(dict.features(g, cfg));
  }
  const std::size_t n = graphs.size();
  std::vector<double> self = kernels::map_indices(
      n, [&](std::size_t i) { return static_cast<double>(kernels::dot(feats[i], feats[i])); }, exec);
  const auto flat = kernels::map_indices(
      n * n,
      [&](std::size_t k) {
        const std::size_t i = k / n, j = k % n;
        if (j < i) return 0.0;
        if (i == j) return 1.0;
        return normalized(kernels::dot(feats[i], feats[j]), static_cast<std::int64_t>(self[i]),
                          static_cast<std::int64_t>(self[j]));
      },
      exec);
  Eigen::MatrixXd gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) gram(i, j) = gram(j, i) = flat[i * n + j];
  return gram;
}

std::vector<double> pairwise_similarity(std::span<const Graph> predicted,
                                        std::span<const Graph> truth, const WLConfig& cfg,
                                        kernels::Exec exec) {
  if (predicted.size() != truth.size())
    throw DataError("similarity: predicted and true sequences differ in length");
  check_config(cfg);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    require_nonempty(predicted[k]);
    require_nonempty(truth[k]);
  }
  return kernels::map_indices(
      truth.size(), [&](std::size_t k) { return wl_subtree_kernel(predicted[k], truth[k], cfg); },
      exec);
}

nlohmann::json KernelReport::to_json() const {
  return {{"similarities", similarities}, {"mean", mean}, {"p90", p90}, {"histogram", histogram}};
}

KernelReport KernelReport::from_json(const nlohmann::json& j) {
  try {
    KernelReport r;
    r.similarities = j.at("similarities").get<std::vector<double>>();
    r.mean = j.at("mean").get<double>();
    r.p90 = j.at("p90").get<double>();
    r.histogram = j.at("histogram").get<std::array<int, kBins>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed kernel report: ") + e.what());
  }
}

KernelReport summarize_similarities(std::vector<double> similarities) {
  if (similarities.empty()) throw DataError("no similarities to summarize");
  KernelReport r;
  r.similarities = std::move(similarities);
  double total = 0;
  for (double s : r.similarities) {
    if (!(s >= 0.0 && s <= 1.0)) throw NumericError("similarity outside [0,1]");
    total += s;
    const int bin = std::min(KernelReport::kBins - 1, static_cast<int>(s * KernelReport::kBins));
    ++r.histogram[bin];
  }
  r.mean = total / static_cast<double>(r.similarities.size());
  std::vector<double> sorted = r.similarities;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(sorted.size())));
  r.p90 = sorted[std::max<std::size_t>(rank, 1) - 1];
  return r;
}

KernelReport similarity_report(std::span<const Graph> predicted, std::span<const Graph> truth,
                               const WLConfig& cfg) {
  return summarize_similarities(pairwise_similarity(predicted, truth, cfg));
}

double SizeCurve::mean_abs_error() const {
  if (truth.empty()) return 0;
  double total = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) total += std::abs(predicted[k] - truth[k]);
  return total / static_cast<double>(truth.size());
}

int SizeCurve::max_abs_error() const {
  int worst = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) worst = std::max(worst, std::abs(predicted[k] - truth[k]));
  return worst;
}

double SizeCurve::fraction_within(int tol) const {
  if (truth.empty()) return 1.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) hits += std::abs(predicted[k] - truth[k]) <= tol;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string SizeCurve::to_csv() const {
  std::ostringstream out;
  out << "step,predicted_nodes,true_nodes,abs_error\n";
  for (std::size_t k = 0; k < truth.size(); ++k)
    out << steps[k] << ',' << predicted[k] << ',' << truth[k] << ','
        << std::abs(predicted[k] - truth[k]) << '\n';
  return out.str();
}

SizeCurve size_curve(std::span<const Graph> predicted, std::span<const Graph> truth,
                     std::span<const std::size_t> steps) {
  if (predicted.size() != truth.size())
    throw DataError("size curve: predicted and true sequences differ in length");
  if (!steps.empty() && steps.size() != truth.size())
    throw DataError("size curve: step labels differ in length");
  SizeCurve c;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    c.steps.push_back(steps.empty() ? k : steps[k]);
    c.predicted.push_back(predicted[k].num_nodes());
    c.truth.push_back(truth[k].num_nodes());
  }
  return c;
}

PcaResult pca_project(std::span<const Eigen::VectorXd> embeddings) {
  if (embeddings.size() < 2) throw DataError("PCA needs at least two vectors");
  const Eigen::Index dim = embeddings[0].size();
  if (dim < 1) throw DimensionError("PCA of zero-dimensional vectors");
  const auto count = static_cast<Eigen::Index>(embeddings.size());
  Eigen::MatrixXd x(count, dim);
  for (Eigen::Index i = 0; i < count; ++i) {
    if (embeddings[i].size() != dim) throw DimensionError("PCA vectors differ in dimension");
    x.row(i) = embeddings[i].transpose();
  }
  PcaResult r;
  r.mean = x.colwise().mean().transpose();
  x.rowwise() -= r.mean.transpose();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(count - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd ascending = solver.eigenvalues().cwiseMax(0.0);
  r.eigenvalues = ascending.reverse();
  r.components = Eigen::MatrixXd::Zero(dim, 2);
  const double total = r.eigenvalues.sum();
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  for (int c = 0; c < 2 && c < dim; ++c) {
    if (r.eigenvalues(c) <= 1e-12 * scale) continue;
    Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;  // sign fixed by the largest-magnitude entry
    r.components.col(c) = v;
    r.explained[c] = r.eigenvalues(c) / total;
  }
  const Eigen::MatrixXd proj = x * r.components;
  r.points.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) r.points[i] = {proj(i, 0), proj(i, 1)};
  return r;
}

}  // namespace evonet
