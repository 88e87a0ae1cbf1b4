#include "aml/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "aml/core/error.hpp"
#include "aml/nn/checkpoint.hpp"

namespace aml::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json counters_json(const cost::CostCounters& c) {
  return {{"gnn_nodes", c.gnn_nodes},
          {"gnn_layer_rows", c.gnn_layer_rows},
          {"mlp_nodes", c.mlp_nodes},
          {"spmm_flops", c.spmm_flops},
          {"dense_flops", c.dense_flops}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string curve_csv(const train::TrainLog& log) {
  std::string s = "epoch,seconds,val_metric\n";
  for (const auto& r : log.records) {
    s += std::to_string(r.epoch) + "," + num(r.seconds) + ",";
    if (r.val_metric) s += num(*r.val_metric);
    s += "\n";
  }
  return s;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const train::TrainingAborted& e) {
    err << "error: training aborted: " << e.what() << "\n";
    return kTrainingAborted;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

struct CompareEntry {
  std::string label;
  RunConfig config;
};

std::vector<CompareEntry> compare_entries(const RunConfig& base, const CompareOptions& o) {
  std::vector<CompareEntry> out;
  for (const std::string& v : o.variants) {
    RunConfig c = base;
    c.train.model.variant = model::parse_variant(v);
    out.push_back({std::string(model::display_name(c.train.model.variant)), c});
  }
  if (o.ablations) {
    struct Ablation {
      const char* label;
      bool model::Toggles::*flag;
    };
    const Ablation rows[] = {{"AML (w/o KT)", &model::Toggles::knowledge_transfer},
                             {"AML (w/o \xce\x94(L))", &model::Toggles::residual_delta},
                             {"AML (w/o HO)", &model::Toggles::homophily},
                             {"AML (w/o PE)", &model::Toggles::pre_encode}};
    for (const Ablation& a : rows) {
      RunConfig c = base;
      c.train.model.variant = model::Variant::Aml;
      c.train.model.toggles.*a.flag = false;
      out.push_back({a.label, c});
    }
  }
  return out;
}

std::string slug(const std::string& label) {
  std::string s;
  for (unsigned char ch : label) {
    if (std::isalnum(ch)) s += static_cast<char>(std::tolower(ch));
    else if (!s.empty() && s.back() != '_') s += '_';
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s.empty() ? "run" : s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void warn_skipped(std::ostream& err, const RunOutcome& r) {
  if (r.skipped_negatives > 0) {
    err << "warning: " << r.skipped_negatives
        << " negative draws skipped after 100 rejections (graph too dense)\n";
  }
}

}  // namespace

RunOutcome execute_run(const RunConfig& config, const Dataset& data, const fs::path& dir,
                       graph::PreEncodingCache* cache) {
  config.train.sampler.validate();
  write_text(dir / "config.txt", config.to_text());

  model::Model model(config.train.model, data.graph, data.features, config.train.seed, cache);
  const eval::EvalSplit valid = eval::EvalSplit::from_edge_set(data.valid);
  const eval::EvalSplit test = eval::EvalSplit::from_edge_set(data.test);

  RunOutcome res;
  res.dir = dir;
  train::FitResult fit;
  try {
    fit = train::fit(config.train, model, data.train, valid.empty() ? nullptr : &valid);
  } catch (const train::TrainingAborted&) {
    // Parameters are the last good ones; keep them for inspection.
    std::vector<const nn::Param*> t = std::as_const(model).params().tensors();
    nn::save_checkpoint(dir / "checkpoint.bin", t);
    throw;
  }
  res.log = fit.log;
  res.best_epoch = fit.best_epoch;
  res.best_val = fit.best_metric;
  res.skipped_negatives = fit.skipped_negatives;
  if (!test.empty()) res.test_metric = eval::evaluate(model, test, config.train.metric);
  if (!res.log.records.empty()) {
    res.seconds = res.log.records.back().seconds;
    res.last_epoch = res.log.records.back().counters;
  }
  for (const auto& r : res.log.records) {
    res.total.gnn_nodes += r.counters.gnn_nodes;
    res.total.gnn_layer_rows += r.counters.gnn_layer_rows;
    res.total.mlp_nodes += r.counters.mlp_nodes;
    res.total.spmm_flops += r.counters.spmm_flops;
    res.total.dense_flops += r.counters.dense_flops;
  }

  res.log.write_csv(dir / "train_log.csv");
  write_text(dir / "curve.csv", curve_csv(res.log));
  const std::vector<const nn::Param*> tensors = std::as_const(model).params().tensors();
  nn::save_checkpoint(dir / "checkpoint.bin", tensors);

  const std::optional<double> final_metric = res.test_metric ? res.test_metric : res.best_val;
  json summary = {
      {"name", config.name},
      {"variant", std::string(model::to_string(config.train.model.variant))},
      {"seed", config.train.seed},
      {"metric", config.train.metric.name()},
      {"final_metric", optional_json(final_metric)},
      {"test_metric", optional_json(res.test_metric)},
      {"best_val_metric", optional_json(res.best_val)},
      {"best_epoch", res.best_epoch},
      {"epochs_run", static_cast<int>(res.log.records.size())},
      {"total_seconds", res.seconds},
      {"counters", counters_json(res.last_epoch)},
      {"counters_total", counters_json(res.total)},
      {"num_nodes", data.num_nodes()},
      {"num_train_pairs", data.train.size()},
      {"skipped_negatives", res.skipped_negatives},
  };
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return res;
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.train.validate();
    const Dataset data = load_dataset(config.data);
    const fs::path dir = unique_run_dir(config.out, config.name);
    const RunOutcome r = execute_run(config, data, dir);
    warn_skipped(err, r);
    out << "run " << dir.string() << ": epochs=" << r.log.records.size()
        << " best_epoch=" << r.best_epoch << " " << config.train.metric.name() << "="
        << (r.test_metric ? num(*r.test_metric) : std::string("n/a"))
        << " gnn_nodes/epoch=" << r.last_epoch.gnn_nodes
        << " mlp_nodes/epoch=" << r.last_epoch.mlp_nodes << " seconds=" << r.seconds << "\n";
    return kOk;
  });
}

int cmd_compare(const RunConfig& config, const CompareOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    if (options.seeds < 1) throw ConfigError("--seeds must be >= 1");
    if (options.variants.empty()) throw ConfigError("--variants is empty");
    config.train.validate();
    const std::vector<CompareEntry> entries = compare_entries(config, options);
    const Dataset data = load_dataset(config.data);
    const fs::path root = unique_run_dir(config.out, config.name);
    graph::PreEncodingCache cache;

    struct Row {
      std::string label;
      std::string variant;
      std::uint64_t seed;
      std::optional<double> metric;
      double seconds;
      cost::CostCounters counters;
      std::string error;
    };
    std::vector<Row> rows;
    int status = kOk;
    for (const CompareEntry& e : entries) {
      for (int s = 0; s < options.seeds; ++s) {
        RunConfig c = e.config;
        c.train.seed = config.train.seed + static_cast<std::uint64_t>(s);
        c.name = slug(e.label) + "_seed" + std::to_string(c.train.seed);
        Row row{e.label, std::string(model::to_string(c.train.model.variant)), c.train.seed,
                std::nullopt, 0.0, {}, {}};
        const int rc = guarded(err, [&] {
          const RunOutcome r = execute_run(c, data, unique_run_dir(root, c.name), &cache);
          warn_skipped(err, r);
          row.metric = r.test_metric ? r.test_metric : r.best_val;
          row.seconds = r.seconds;
          row.counters = r.last_epoch;
          return kOk;
        });
        if (rc != kOk) {
          row.error = "failed";
          status = rc;
        }
        out << e.label << " seed=" << c.train.seed << " "
            << (row.metric ? num(*row.metric) : std::string("n/a")) << "\n";
        rows.push_back(row);
      }
    }

    std::map<std::string, std::vector<double>> by_label;
    for (const Row& r : rows)
      if (r.metric) by_label[r.label].push_back(*r.metric);
    auto stats = [&](const std::string& label) {
      const auto& v = by_label[label];
      if (v.empty()) return std::pair<std::string, std::string>{"", ""};
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      return std::pair<std::string, std::string>{num(mean), num(sd)};
    };

    std::string csv = "label,variant,seed,metric,mean_metric,std_metric,seconds,gnn_nodes,mlp_nodes,status\n";
    for (const Row& r : rows) {
      const auto [mean, sd] = stats(r.label);
      csv += csv_field(r.label) + "," + r.variant + "," + std::to_string(r.seed) + "," +
             (r.metric ? num(*r.metric) : "") + "," + mean + "," + sd + "," + num(r.seconds) +
             "," + std::to_string(r.counters.gnn_nodes) + "," +
             std::to_string(r.counters.mlp_nodes) + "," + (r.error.empty() ? "ok" : r.error) +
             "\n";
    }
    write_text(root / "comparison.csv", csv);
    out << "comparison written to " << (root / "comparison.csv").string() << "\n";
    return status;
  });
}

int cmd_gen(const graph::SyntheticSpec& spec, std::uint64_t seed, const fs::path& dir,
            std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (dir.empty()) throw ConfigError("--out is required");
    const graph::SyntheticData data = graph::generate_synthetic(spec, seed);
    write_dataset(dir, data);
    out << "wrote " << dir.string() << ": nodes=" << data.graph.num_nodes()
        << " train_pairs=" << data.train.size() << " valid=" << data.valid.size()
        << " test=" << data.test.size() << "\n";
    return kOk;
  });
}

int cmd_eval(const fs::path& run_dir, const std::string& split,
             const std::optional<std::string>& metric, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config_file(run_dir / "config.txt");
    if (metric) c.set("metric", *metric);
    const Dataset data = load_dataset(c.data);
    const graph::EdgeSet* set = nullptr;
    if (split == "test") set = &data.test;
    else if (split == "valid") set = &data.valid;
    else throw ConfigError("--split must be test or valid");
    model::Model model(c.train.model, data.graph, data.features, c.train.seed);
    const std::vector<nn::Param*> tensors = model.params().tensors();
    nn::load_checkpoint(run_dir / "checkpoint.bin", tensors);
    const double value = eval::evaluate(model, eval::EvalSplit::from_edge_set(*set), c.train.metric);
    json result = {{"run", run_dir.string()}, {"split", split},
                   {"metric", c.train.metric.name()}, {"value", value}};
    out << result.dump() << "\n";
    return kOk;
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric link-prediction trainer"};
  app.require_subcommand(1);

  // Flag -> config key. Flags override the config file.
  const std::vector<std::pair<std::string, std::string>> flag_keys = {
      {"--seed", "seed"},       {"--out", "out"},         {"--variant", "variant"},
      {"--strategy", "strategy"}, {"--epochs", "epochs"}, {"--lr", "lr"},
      {"--batch-size", "batch_size"}, {"--layers", "layers"}, {"--dim", "dim"},
      {"--neg-k", "neg_k"},     {"--fanout", "fanout"},   {"--data", "data"},
      {"--name", "name"},       {"--metric", "metric"},   {"--lambda", "lambda"},
      {"--patience", "patience"}, {"--eval-every", "eval_every"}};

  struct RunFlags {
    std::string config;
    std::map<std::string, std::string> values;
    std::vector<std::string> sets;
  };
  auto add_run_flags = [&](CLI::App* sub, RunFlags& f) {
    sub->add_option("--config", f.config, "key=value config file");
    for (const auto& [flag, key] : flag_keys) sub->add_option(flag, f.values[key]);
    sub->add_option("--set", f.sets, "extra key=value overrides");
  };
  auto resolve = [&](CLI::App* sub, const RunFlags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config_file(f.config);
    std::vector<std::pair<std::string, std::string>> ov;
    for (const auto& [flag, key] : flag_keys) {
      if (sub->get_option(flag)->count() > 0) ov.emplace_back(key, f.values.at(key));
    }
    for (const std::string& s : f.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    apply_overrides(c, ov);
    return c;
  };

  RunFlags train_flags;
  CLI::App* train_cmd = app.add_subcommand("train", "train one configuration");
  add_run_flags(train_cmd, train_flags);

  RunFlags cmp_flags;
  CompareOptions cmp;
  std::string variants = "aml,sym_gnn";
  CLI::App* cmp_cmd = app.add_subcommand("compare", "train several variants on the same data");
  add_run_flags(cmp_cmd, cmp_flags);
  cmp_cmd->add_option("--variants", variants, "comma-separated variant list");
  cmp_cmd->add_option("--seeds", cmp.seeds, "number of seeds");
  cmp_cmd->add_flag("--ablations", cmp.ablations, "add the four single-toggle AML ablations");

  graph::SyntheticSpec spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out, kind = "sbm", features = "gaussian";
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset");
  gen_cmd->add_option("--kind", kind, "sbm|chain|star|erdos");
  gen_cmd->add_option("--nodes", spec.nodes);
  gen_cmd->add_option("--blocks", spec.blocks);
  gen_cmd->add_option("--p-in", spec.p_in);
  gen_cmd->add_option("--p-out", spec.p_out);
  gen_cmd->add_option("--p", spec.p);
  gen_cmd->add_option("--feature-dim", spec.feature_dim);
  gen_cmd->add_option("--features", features, "gaussian|noisy_block");
  gen_cmd->add_option("--feature-noise", spec.feature_noise);
  gen_cmd->add_option("--valid-frac", spec.valid_frac);
  gen_cmd->add_option("--test-frac", spec.test_frac);
  gen_cmd->add_option("--eval-negatives", spec.eval_negatives);
  gen_cmd->add_option("--seed", gen_seed);
  gen_cmd->add_option("--out", gen_out)->required();

  std::string eval_run, eval_split = "test", eval_metric;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a split with a saved run");
  eval_cmd->add_option("--run", eval_run, "run directory")->required();
  eval_cmd->add_option("--split", eval_split, "test|valid");
  eval_cmd->add_option("--metric", eval_metric, "hits@K|mrr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }

  if (train_cmd->parsed()) {
    RunConfig c;
    if (const int rc = guarded(err, [&] { c = resolve(train_cmd, train_flags); return kOk; }))
      return rc;
    return cmd_train(c, out, err);
  }
  if (cmp_cmd->parsed()) {
    RunConfig c;
    if (const int rc = guarded(err, [&] { c = resolve(cmp_cmd, cmp_flags); return kOk; }))
      return rc;
    if (c.name == "run") c.name = "compare";
    cmp.variants.clear();
    std::stringstream ss(variants);
    for (std::string v; std::getline(ss, v, ',');)
      if (!v.empty()) cmp.variants.push_back(v);
    return cmd_compare(c, cmp, out, err);
  }
  if (gen_cmd->parsed()) {
    return guarded(err, [&] {
      spec.kind = graph::parse_synthetic_kind(kind);
      spec.features = graph::parse_feature_kind(features);
      return cmd_gen(spec, gen_seed, gen_out, out, err);
    });
  }
  if (eval_cmd->parsed()) {
    return cmd_eval(eval_run, eval_split,
                    eval_metric.empty() ? std::nullopt : std::optional<std::string>(eval_metric),
                    out, err);
  }
  return kBadConfig;
}

}  // namespace aml::cli
