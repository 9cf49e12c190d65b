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

#include "evonet/harness.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "evonet/errors.hpp"
#include "evonet/plot.hpp"

namespace evonet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Re-throws with the stage name prefixed, keeping the error family.
template <typename F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(stage + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(stage + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(stage + ": " + e.what());
  }
}

void reject_unknown(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key in " + where + ": " + key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for key ") + key);
  }
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

std::string snapshot_mode_name(SnapshotMode m) { return m == SnapshotMode::cumulative ? "cumulative" : "sliding"; }
std::string attribute_name(AttributeRule r) { return r == AttributeRule::degree ? "degree" : "avg_rating"; }

}  // namespace

json DatasetConfig::to_json() const {
  switch (source) {
    case DatasetSource::synthetic:
      return {{"source", "synthetic"},
              {"family", evonet::to_string(synthetic.family)},
              {"mode", evonet::to_string(synthetic.mode)},
              {"steps", synthetic.steps}};
    case DatasetSource::file:
      return {{"source", "file"}, {"path", path}};
    case DatasetSource::ingest:
      return {{"source", "ingest"},
              {"path", path},
              {"format", format == EdgeFormat::btc ? "btc" : "plain"},
              {"snapshots", snapshots.count},
              {"snapshot_mode", snapshot_mode_name(snapshots.mode)},
              {"attribute", attribute_name(snapshots.attribute_rule)},
              {"take", take}};
  }
  return {};
}

DatasetConfig DatasetConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("dataset must be a JSON object");
  DatasetConfig c;
  const auto source = get_or<std::string>(j, "source", "synthetic");
  if (source == "synthetic") {
    reject_unknown(j, {"source", "family", "mode", "steps"}, "dataset");
    c.source = DatasetSource::synthetic;
    try {
      c.synthetic.family = parse_family(get_or<std::string>(j, "family", "path"));
      c.synthetic.mode = parse_growth_mode(get_or<std::string>(j, "mode", "grow"));
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    c.synthetic.steps = get_or<int>(j, "steps", c.synthetic.steps);
  } else if (source == "file") {
    reject_unknown(j, {"source", "path"}, "dataset");
    c.source = DatasetSource::file;
    c.path = get_or<std::string>(j, "path", "");
  } else if (source == "ingest") {
    reject_unknown(j, {"source", "path", "format", "snapshots", "snapshot_mode", "attribute", "take"}, "dataset");
    c.source = DatasetSource::ingest;
    c.path = get_or<std::string>(j, "path", "");
    try {
      c.format = parse_edge_format(get_or<std::string>(j, "format", "btc"));
      c.snapshots.mode = parse_snapshot_mode(get_or<std::string>(j, "snapshot_mode", "cumulative"));
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    const auto attr = get_or<std::string>(j, "attribute", "degree");
    if (attr == "degree") c.snapshots.attribute_rule = AttributeRule::degree;
    else if (attr == "avg_rating") c.snapshots.attribute_rule = AttributeRule::avg_rating;
    else throw ConfigError("unknown attribute rule: " + attr);
    c.snapshots.count = get_or<int>(j, "snapshots", c.snapshots.count);
    c.take = get_or<int>(j, "take", 0);
    if (c.snapshots.count < 1) throw ConfigError("snapshots must be >= 1");
    if (c.take < 0) throw ConfigError("take must be >= 0");
  } else {
    throw ConfigError("unknown dataset source: " + source);
  }
  if (c.source != DatasetSource::synthetic && c.path.empty()) throw ConfigError("dataset path is required");
  if (c.source == DatasetSource::synthetic && c.synthetic.steps < 1) throw ConfigError("steps must be >= 1");
  return c;
}

json ExperimentConfig::to_json() const {
  json kinds = json::array();
  for (auto k : baselines) kinds.push_back(evonet::to_string(k));
  return {{"dataset", dataset.to_json()},
          {"model", model.to_json()},
          {"baselines", kinds},
          {"output_dir", output_dir},
          {"wl_iterations", wl.iterations},
          {"label_rule", evonet::to_string(wl.label_rule)},
          {"bin_width", wl.bin_width},
          {"sampling", sampling},
          {"estimator_iterations", estimator_iterations}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"dataset", "model", "baselines", "output_dir", "wl_iterations", "label_rule", "bin_width",
                  "sampling", "estimator_iterations"},
                 "experiment config");
  ExperimentConfig c;
  if (j.contains("dataset")) c.dataset = DatasetConfig::from_json(j.at("dataset"));
  if (j.contains("model")) c.model = ModelConfig::from_json(j.at("model"));
  if (j.contains("baselines")) {
    if (!j.at("baselines").is_array()) throw ConfigError("baselines must be a list");
    c.baselines.clear();
    for (const auto& k : j.at("baselines")) {
      if (!k.is_string()) throw ConfigError("baseline names must be strings");
      c.baselines.push_back(parse_baseline_kind(k.get<std::string>()));
    }
  }
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
  c.wl.iterations = get_or<int>(j, "wl_iterations", c.wl.iterations);
  c.wl.label_rule = parse_label_rule(get_or<std::string>(j, "label_rule", "degree"));
  c.wl.bin_width = get_or<double>(j, "bin_width", c.wl.bin_width);
  c.sampling = get_or<std::string>(j, "sampling", c.sampling);
  c.estimator_iterations = get_or<int>(j, "estimator_iterations", c.estimator_iterations);
  if (c.wl.iterations < 0) throw ConfigError("wl_iterations must be >= 0");
  if (!(c.wl.bin_width > 0)) throw ConfigError("bin_width must be positive");
  if (c.sampling != "bernoulli" && c.sampling != "threshold")
    throw ConfigError("sampling must be bernoulli or threshold");
  if (c.estimator_iterations < 0) throw ConfigError("estimator_iterations must be >= 0");
  if (c.output_dir.empty()) throw ConfigError("output_dir must be nonempty");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

GraphSequence load_dataset(const DatasetConfig& cfg, int window_size) {
  switch (cfg.source) {
    case DatasetSource::synthetic: {
      auto seq = generate(cfg.synthetic);
      seq.window_size = window_size;
      return seq;
    }
    case DatasetSource::file:
      return read_sequence_jsonl(cfg.path, window_size);
    case DatasetSource::ingest: {
      auto seq = snapshot_sequence(parse_edge_stream(cfg.path, cfg.format), cfg.snapshots, window_size);
      if (cfg.take > 0 && static_cast<std::size_t>(cfg.take) < seq.size()) {
        seq.graphs.resize(cfg.take);
        seq = make_sequence(std::move(seq.graphs), window_size);
      }
      return seq;
    }
  }
  throw ConfigError("unknown dataset source");
}

EdgeSampler make_sampler(const std::string& sampling, std::uint64_t seed, std::size_t target) {
  if (sampling == "threshold") return EdgeSampler::threshold();
  return EdgeSampler::bernoulli(kernels::mix_seed(seed, target));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  const auto& mcfg = cfg.model;
  GraphSequence seq = staged("dataset", [&] { return load_dataset(cfg.dataset, mcfg.window_size); });
  if (log) *log << "dataset: " << seq.size() << " snapshots, " << seq.registry.size() << " entities\n";

  ExperimentResult result;
  result.plan = staged("split", [&] {
    if (seq.size() <= static_cast<std::size_t>(mcfg.window_size) + 1)
      throw DataError("sequence of " + std::to_string(seq.size()) + " snapshots is too short for window " +
                      std::to_string(mcfg.window_size));
    return plan_split(seq.size(), mcfg.window_size, mcfg.split_fraction, mcfg.validation);
  });
  const auto& targets = result.plan.test_targets;
  if (targets.empty()) throw DataError("split: no test targets");

  Model model(mcfg);
  result.training = staged("train", [&] { return train(model, seq, log); });

  staged("predict", [&] {
    MethodResult evo;
    evo.method = "evonet";
    for (auto t : targets) {
      auto sampler = make_sampler(cfg.sampling, mcfg.seed, t);
      evo.predictions.push_back(model.predict(seq, t, sampler).graph);
    }
    result.methods.push_back(std::move(evo));
  });

  staged("baselines", [&] {
    SizeEstimator estimator(mcfg.window_size, mcfg.size_hidden, mcfg.seed ^ 0x5151ULL);
    estimator.fit(size_history(seq, 0, result.plan.train_end), cfg.estimator_iterations);
    std::vector<SizePoint> estimates;
    for (auto t : targets)
      estimates.push_back(estimator.estimate(size_history(seq, t - mcfg.window_size, t)));

    const std::size_t methods = cfg.baselines.size(), count = targets.size();
    std::vector<Graph> graphs(methods * count);
    std::vector<std::exception_ptr> failures(methods * count);
    const auto jobs = static_cast<std::int64_t>(graphs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t job = 0; job < jobs; ++job) {
      const std::size_t b = job / count, k = job % count;
      try {
        graphs[job] = generate_baseline(cfg.baselines[b], estimates[k], seq.graphs[targets[k] - 1],
                                        kernels::mix_seed(mcfg.seed + 1 + b, targets[k]));
      } catch (...) {
        failures[job] = std::current_exception();
      }
    }
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
    for (std::size_t b = 0; b < methods; ++b) {
      MethodResult r;
      r.method = to_string(cfg.baselines[b]);
      r.predictions.assign(graphs.begin() + b * count, graphs.begin() + (b + 1) * count);
      result.methods.push_back(std::move(r));
    }
    result.baseline_sizes.steps = targets;
    for (std::size_t k = 0; k < count; ++k) {
      result.baseline_sizes.predicted.push_back(estimates[k].first);
      result.baseline_sizes.truth.push_back(seq.graphs[targets[k]].num_nodes());
    }
  });

  std::vector<Graph> truth;
  for (auto t : targets) truth.push_back(seq.graphs[t]);
  staged("evaluate", [&] {
    for (auto& m : result.methods) m.report = similarity_report(m.predictions, truth, cfg.wl);
    result.sizes = size_curve(result.methods.front().predictions, truth, targets);
    std::vector<Eigen::VectorXd> embeddings;
    for (const auto& g : seq.graphs) embeddings.push_back(model.encoder().encode(g));
    result.pca = pca_project(embeddings);
  });
  if (log)
    for (const auto& m : result.methods)
      *log << m.method << ": mean " << m.report.mean << " p90 " << m.report.p90 << "\n";

  result.artifacts = staged("artifacts", [&] { return write_artifacts(cfg, seq, model, result); });
  return result;
}

std::vector<std::string> write_artifacts(const ExperimentConfig& cfg, const GraphSequence& seq,
                                         const Model& model, const ExperimentResult& result) {
  const fs::path dir = resolve_output_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    plot::write_text((dir / name).string(), text);
    written.push_back(name);
  };

  put("config.json", cfg.to_json().dump(2) + "\n");
  put("checkpoint.json", model.checkpoint().dump() + "\n");
  put("training.json", json{{"initial_loss", result.training.initial_loss},
                            {"epoch_loss", result.training.epoch_loss},
                            {"validation_loss", result.training.validation_loss},
                            {"train_end", result.plan.train_end},
                            {"test_targets", result.plan.test_targets}}
                               .dump(2) + "\n");

  std::vector<std::pair<std::string, KernelReport>> reports;
  for (const auto& m : result.methods) {
    reports.emplace_back(m.method, m.report);
    put("report_" + m.method + ".json", m.report.to_json().dump(2) + "\n");
    std::ostringstream preds;
    write_sequence_jsonl(preds, m.predictions);
    put("predictions_" + m.method + ".jsonl", preds.str());
    std::ostringstream hist;
    hist << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < KernelReport::kBins; ++b)
      hist << fmt(b / 20.0) << ',' << fmt((b + 1) / 20.0) << ',' << m.report.histogram[b] << '\n';
    put("histogram_" + m.method + ".csv", hist.str());
    put("histogram_" + m.method + ".svg",
        plot::histogram_chart({m.method + " similarity", "normalized WL similarity", "test steps"},
                              {m.report.histogram.begin(), m.report.histogram.end()}, 0.0, 1.0));
  }

  put("size_curve.csv", result.sizes.to_csv());
  put("baseline_size_curve.csv", result.baseline_sizes.to_csv());
  {
    plot::Series pred{"predicted", {}, {}, "#1f77b4"}, real{"real", {}, {}, "#ff7f0e"};
    for (std::size_t k = 0; k < result.sizes.steps.size(); ++k) {
      pred.x.push_back(static_cast<double>(result.sizes.steps[k]));
      pred.y.push_back(result.sizes.predicted[k]);
      real.x.push_back(static_cast<double>(result.sizes.steps[k]));
      real.y.push_back(result.sizes.truth[k]);
    }
    put("size_curve.svg", plot::line_chart({"graph size", "time step", "nodes"}, {pred, real}));
  }

  {
    std::ostringstream emb, pca;
    emb << "step,split";
    const auto dim = result.pca.mean.size();
    for (Eigen::Index d = 0; d < dim; ++d) emb << ",e" << d;
    emb << '\n';
    pca << "step,split,pc1,pc2\n";
    plot::Series train_pts{"train", {}, {}, "#1f77b4"}, test_pts{"test", {}, {}, "#d62728"};
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const char* split = t < result.plan.train_end ? "train" : "test";
      const Eigen::VectorXd e = model.encoder().encode(seq.graphs[t]);
      emb << t << ',' << split;
      for (Eigen::Index d = 0; d < e.size(); ++d) emb << ',' << fmt(e(d));
      emb << '\n';
      const auto& p = result.pca.points[t];
      pca << t << ',' << split << ',' << fmt(p[0]) << ',' << fmt(p[1]) << '\n';
      auto& s = t < result.plan.train_end ? train_pts : test_pts;
      s.x.push_back(p[0]);
      s.y.push_back(p[1]);
    }
    put("embeddings.csv", emb.str());
    put("pca.csv", pca.str());
    put("pca.json", json{{"explained", result.pca.explained}}.dump(2) + "\n");
    put("pca.svg", plot::scatter_chart({"embedding PCA", "PC1", "PC2"}, {train_pts, test_pts}));
  }

  const auto table = compare_report(reports);
  put("comparison.md", table.to_markdown());
  put("comparison.csv", table.to_csv());
  return written;
}

ComparisonTable compare_report(const std::vector<std::pair<std::string, KernelReport>>& reports) {
  if (reports.empty()) throw ConfigError("comparison needs at least one report");
  ComparisonTable t;
  double best_mean = -1, best_p90 = -1;
  for (const auto& [name, r] : reports) {
    t.rows.push_back({name, r.mean, r.p90});
    best_mean = std::max(best_mean, r.mean);
    best_p90 = std::max(best_p90, r.p90);
  }
  for (auto& row : t.rows) {
    row.best_mean = row.mean == best_mean;
    row.best_p90 = row.p90 == best_p90;
  }
  return t;
}

std::string ComparisonTable::to_markdown() const {
  std::ostringstream out;
  out << "| Method | Mean | 90%ile |\n|---|---|---|\n" << std::fixed << std::setprecision(2);
  for (const auto& r : rows) {
    out << "| " << r.method << " | ";
    if (r.best_mean) out << "**" << r.mean << "**";
    else out << r.mean;
    out << " | ";
    if (r.best_p90) out << "**" << r.p90 << "**";
    else out << r.p90;
    out << " |\n";
  }
  return out.str();
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out << "method,mean,p90,best_mean,best_p90\n";
  for (const auto& r : rows)
    out << r.method << ',' << fmt(r.mean) << ',' << fmt(r.p90) << ',' << r.best_mean << ',' << r.best_p90 << '\n';
  return out.str();
}

std::vector<std::pair<std::string, KernelReport>> load_reference_reports(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reference reports " + path);
  try {
    json j;
    in >> j;
    std::vector<std::pair<std::string, KernelReport>> out;
    for (const auto& m : j.at("methods")) {
      KernelReport r;
      r.mean = m.at("mean").get<double>();
      r.p90 = m.at("p90").get<double>();
      out.emplace_back(m.at("method").get<std::string>(), r);
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed reference reports: ") + e.what());
  }
}

std::string resolve_output_dir(const std::string& dir) {
  const fs::path p(dir);
  const char* root = std::getenv("EVONET_OUTPUT_ROOT");
  if (root && *root && p.is_relative()) return (fs::path(root) / p).string();
  return p.string();
}

}  // namespace evonet
