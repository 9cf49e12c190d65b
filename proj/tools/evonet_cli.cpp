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

// Command-line front end. Exit codes: 0 ok, 2 config, 3 data, 4 numeric.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "evonet/baselines.hpp"
#include "evonet/errors.hpp"
#include "evonet/eval.hpp"
#include "evonet/harness.hpp"
#include "evonet/ingest.hpp"
#include "evonet/model.hpp"
#include "evonet/plot.hpp"
#include "evonet/synthetic.hpp"

using namespace evonet;
using nlohmann::json;

namespace {

std::string out_path(const std::string& p) {
  const auto resolved = resolve_output_dir(p);
  const auto parent = std::filesystem::path(resolved).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  return resolved;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw DataError(path + " is not valid JSON: " + e.what());
  }
}

std::vector<Graph> tail(const GraphSequence& seq, std::size_t count) {
  if (count > seq.size()) throw DataError("truth sequence is shorter than the predictions");
  return {seq.graphs.end() - static_cast<std::ptrdiff_t>(count), seq.graphs.end()};
}

struct ModelOverrides {
  std::string config;
  std::optional<int> epochs, hidden, window;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> optimizer;
  std::optional<double> step_size, split;

  void add(CLI::App* app) {
    app->add_option("--config", config, "JSON file of model hyperparameters");
    app->add_option("--epochs", epochs);
    app->add_option("--hidden-dim", hidden, "encoder width d (embeddings are 2d)");
    app->add_option("--window", window, "history window w");
    app->add_option("--seed", seed);
    app->add_option("--optimizer", optimizer, "sgd|adam");
    app->add_option("--step-size", step_size);
    app->add_option("--split", split, "training fraction");
  }
  ModelConfig resolve() const {
    json j = config.empty() ? json::object() : read_json(config);
    if (epochs) j["epochs"] = *epochs;
    if (hidden) j["hidden_dim"] = *hidden;
    if (window) j["window_size"] = *window;
    if (seed) j["seed"] = *seed;
    if (optimizer) j["optimizer"] = *optimizer;
    if (step_size) j["step_size"] = *step_size;
    if (split) j["split_fraction"] = *split;
    return ModelConfig::from_json(j);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolving-graph topology prediction and evaluation"};
  app.require_subcommand(1);
  app.footer(
      "Relative output paths are placed under $EVONET_OUTPUT_ROOT when it is set.\n"
      "CSV columns: size curve step,predicted_nodes,true_nodes,abs_error; histogram bin_lo,bin_hi,count;\n"
      "PCA step,split,pc1,pc2; embeddings step,split,e0..; comparison method,mean,p90,best_mean,best_p90.\n"
      "Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.");

  auto* gen = app.add_subcommand("generate", "write a synthetic snapshot sequence as JSON lines");
  std::string family = "path", mode = "grow", gen_out;
  int steps = 1000;
  gen->add_option("--family", family, "path|cycle|ladder");
  gen->add_option("--mode", mode, "grow|grow-with-removal");
  gen->add_option("--steps", steps, "number of snapshots");
  gen->add_option("--out", gen_out)->required();

  auto* ing = app.add_subcommand("ingest", "cut a timestamped edge list into snapshots");
  std::string ing_in, ing_out, ing_format = "btc", ing_mode = "cumulative", ing_attr = "degree";
  int ing_count = 1000, ing_take = 0;
  bool ing_stats = false;
  ing->add_option("--input", ing_in)->required();
  ing->add_option("--format", ing_format, "btc (src,dst,rating,ts) | plain (src,dst,ts)");
  ing->add_option("--snapshots", ing_count, "number of timestamp quantiles");
  ing->add_option("--mode", ing_mode, "cumulative|sliding");
  ing->add_option("--attribute", ing_attr, "degree|avg_rating");
  ing->add_option("--take", ing_take, "keep only the first N snapshots (0 = all)");
  ing->add_flag("--stats", ing_stats, "print dataset statistics");
  ing->add_option("--out", ing_out);

  auto* tr = app.add_subcommand("train", "train a model on a sequence and write a checkpoint");
  std::string tr_seq, tr_out;
  ModelOverrides tr_model;
  tr->add_option("--seq", tr_seq)->required();
  tr->add_option("--out", tr_out)->required();
  tr_model.add(tr);

  auto* pr = app.add_subcommand("predict", "predict every test snapshot of a sequence");
  std::string pr_ckpt, pr_seq, pr_out, pr_sampling = "bernoulli";
  std::optional<std::uint64_t> pr_seed;
  pr->add_option("--checkpoint", pr_ckpt)->required();
  pr->add_option("--seq", pr_seq)->required();
  pr->add_option("--out", pr_out)->required();
  pr->add_option("--seed", pr_seed, "edge sampling seed (default: the model seed)");
  pr->add_option("--sampling", pr_sampling, "bernoulli|threshold");

  auto* ev = app.add_subcommand("evaluate", "score predictions against the last snapshots of a sequence");
  std::string ev_pred, ev_truth, ev_out, ev_sizes, ev_rule = "degree";
  int ev_h = 3;
  double ev_bin = 1.0;
  ev->add_option("--pred", ev_pred)->required();
  ev->add_option("--truth", ev_truth)->required();
  ev->add_option("--out", ev_out, "KernelReport JSON");
  ev->add_option("--size-curve", ev_sizes, "size curve CSV");
  ev->add_option("--wl-iterations", ev_h);
  ev->add_option("--label-rule", ev_rule, "degree|binned_attribute");
  ev->add_option("--bin-width", ev_bin);

  auto* bl = app.add_subcommand("baseline", "predict every test snapshot with a random-graph model");
  std::string bl_kind, bl_seq, bl_out;
  std::uint64_t bl_seed = 7;
  int bl_window = 10, bl_iters = 400;
  double bl_split = 0.8;
  bl->add_option("--kind", bl_kind, "er|sbm|ba|power|kron-rand|kron-fix")->required();
  bl->add_option("--seq", bl_seq)->required();
  bl->add_option("--out", bl_out)->required();
  bl->add_option("--seed", bl_seed);
  bl->add_option("--window", bl_window);
  bl->add_option("--split", bl_split);
  bl->add_option("--estimator-iterations", bl_iters);

  auto* rp = app.add_subcommand("report", "tabulate KernelReports side by side");
  std::vector<std::string> rp_items;
  std::string rp_out, rp_csv, rp_reference;
  rp->add_option("reports", rp_items, "name=report.json pairs");
  rp->add_option("--reference", rp_reference, "stored summary fixture");
  rp->add_option("--out", rp_out, "markdown table (stdout if omitted)");
  rp->add_option("--csv", rp_csv);

  auto* run = app.add_subcommand("run", "run a full experiment from a JSON config");
  std::string run_cfg;
  bool run_quiet = false;
  run->add_option("--config", run_cfg)->required();
  run->add_flag("--quiet", run_quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const auto seq = evonet::generate({parse_family(family), parse_growth_mode(mode), steps});
      write_sequence_jsonl(out_path(gen_out), seq.graphs);
    } else if (*ing) {
      const auto stream = parse_edge_stream(ing_in, parse_edge_format(ing_format));
      if (ing_stats) std::cout << format_stats(dataset_stats(stream));
      if (!ing_out.empty()) {
        DatasetConfig d;
        d.source = DatasetSource::ingest;
        d.path = ing_in;
        d.format = parse_edge_format(ing_format);
        d.snapshots.count = ing_count;
        d.snapshots.mode = parse_snapshot_mode(ing_mode);
        d.snapshots.attribute_rule = ing_attr == "avg_rating" ? AttributeRule::avg_rating : AttributeRule::degree;
        if (ing_attr != "avg_rating" && ing_attr != "degree") throw ConfigError("unknown attribute rule " + ing_attr);
        d.take = ing_take;
        write_sequence_jsonl(out_path(ing_out), load_dataset(d, 10).graphs);
      }
    } else if (*tr) {
      const auto cfg = tr_model.resolve();
      const auto seq = read_sequence_jsonl(tr_seq, cfg.window_size);
      Model model(cfg);
      train(model, seq, &std::cerr);
      plot::write_text(out_path(tr_out), model.checkpoint().dump() + "\n");
    } else if (*pr) {
      const Model model = Model::from_checkpoint(read_json(pr_ckpt));
      const auto& cfg = model.config();
      const auto seq = read_sequence_jsonl(pr_seq, cfg.window_size);
      if (pr_sampling != "bernoulli" && pr_sampling != "threshold") throw ConfigError("unknown sampling " + pr_sampling);
      const auto plan = plan_split(seq.size(), cfg.window_size, cfg.split_fraction);
      std::vector<Graph> preds;
      for (auto t : plan.test_targets) {
        auto sampler = make_sampler(pr_sampling, pr_seed.value_or(cfg.seed), t);
        preds.push_back(model.predict(seq, t, sampler).graph);
      }
      write_sequence_jsonl(out_path(pr_out), preds);
    } else if (*ev) {
      std::ifstream in(ev_pred);
      if (!in) throw DataError("cannot open " + ev_pred);
      const auto preds = read_graphs_jsonl(in);
      const auto truth = tail(read_sequence_jsonl(ev_truth), preds.size());
      const WLConfig wl{ev_h, parse_label_rule(ev_rule), ev_bin};
      const auto report = similarity_report(preds, truth, wl);
      const auto text = report.to_json().dump(2) + "\n";
      if (ev_out.empty()) std::cout << text;
      else plot::write_text(out_path(ev_out), text);
      if (!ev_sizes.empty()) plot::write_text(out_path(ev_sizes), size_curve(preds, truth).to_csv());
    } else if (*bl) {
      const auto kind = parse_baseline_kind(bl_kind);
      const auto seq = read_sequence_jsonl(bl_seq, bl_window);
      const auto plan = plan_split(seq.size(), bl_window, bl_split);
      SizeEstimator estimator(bl_window, 32, bl_seed ^ 0x5151ULL);
      estimator.fit(size_history(seq, 0, plan.train_end), bl_iters);
      std::vector<Graph> preds;
      for (auto t : plan.test_targets)
        preds.push_back(generate_baseline(kind, estimator.estimate(size_history(seq, t - bl_window, t)),
                                          seq.graphs[t - 1], kernels::mix_seed(bl_seed, t)));
      write_sequence_jsonl(out_path(bl_out), preds);
    } else if (*rp) {
      std::vector<std::pair<std::string, KernelReport>> reports;
      if (!rp_reference.empty()) reports = load_reference_reports(rp_reference);
      for (const auto& item : rp_items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("expected name=report.json, got " + item);
        reports.emplace_back(item.substr(0, eq), KernelReport::from_json(read_json(item.substr(eq + 1))));
      }
      const auto table = compare_report(reports);
      if (rp_out.empty()) std::cout << table.to_markdown();
      else plot::write_text(out_path(rp_out), table.to_markdown());
      if (!rp_csv.empty()) plot::write_text(out_path(rp_csv), table.to_csv());
    } else if (*run) {
      const auto cfg = ExperimentConfig::load(run_cfg);
      const auto result = run_experiment(cfg, run_quiet ? nullptr : &std::cerr);
      std::cout << compare_report([&] {
        std::vector<std::pair<std::string, KernelReport>> r;
        for (const auto& m : result.methods) r.emplace_back(m.method, m.report);
        return r;
      }()).to_markdown();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
