#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "aml/cli/commands.hpp"
#include "aml/core/error.hpp"
#include "aml/graph/io.hpp"
#include "test_support.hpp"

namespace aml::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "aml");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> column(const fs::path& csv, std::size_t index) {
  std::vector<std::string> out;
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i <= index; ++i) std::getline(row, cell, ',');
    out.push_back(cell);
  }
  return out;
}

fs::path gen(const fs::path& root, std::vector<std::string> extra = {}) {
  const fs::path dir = root / "data";
  std::vector<std::string> args{"gen", "--out", dir.string(), "--seed", "3"};
  args.insert(args.end(), extra.begin(), extra.end());
  const Result r = run(args);
  EXPECT_EQ(r.code, kOk) << r.err;
  return dir;
}

TEST(Cli, MissingDatasetExitsTwo) {
  const fs::path out = aml::testing::scratch_dir("cli_missing");
  const Result r = run({"train", "--data", (out / "nope").string(), "--out", out.string()});
  EXPECT_EQ(r.code, kBadConfig);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, BadFlagsExitTwo) {
  const fs::path root = aml::testing::scratch_dir("cli_badflags");
  const fs::path data = gen(root, {"--nodes", "30"});
  EXPECT_EQ(run({"train", "--data", data.string(), "--variant", "gat"}).code, kBadConfig);
  EXPECT_EQ(run({"train", "--data", data.string(), "--lr", "-1"}).code, kBadConfig);
  EXPECT_EQ(run({"train", "--bogus"}).code, kBadConfig);
  EXPECT_EQ(run({"train", "--set", "nokey"}).code, kBadConfig);
  EXPECT_EQ(run({"gen", "--out", "x", "--nodes", "0"}).code, kBadConfig);
  EXPECT_EQ(run({"gen", "--out", "x", "--kind", "ring"}).code, kBadConfig);
  EXPECT_EQ(run({}).code, kBadConfig);
}

TEST(Cli, SmlpOnChainUsesNoGnn) {
  const fs::path root = aml::testing::scratch_dir("cli_smlp");
  const fs::path data = gen(root, {"--kind", "chain", "--nodes", "40"});
  const fs::path out = root / "runs";
  const Result r = run({"train", "--data", data.string(), "--out", out.string(), "--variant", "smlp",
                        "--strategy", "rowwise", "--epochs", "2", "--dim", "8"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json s = json::parse(slurp(out / "run" / "summary.json"));
  EXPECT_EQ(s["counters"]["gnn_nodes"], 0);
  EXPECT_GT(s["counters"]["mlp_nodes"].get<int>(), 0);
  for (const char* key : {"final_metric", "total_seconds", "counters"}) EXPECT_TRUE(s.contains(key));
}

TEST(Cli, RerunsAreDeterministicAndNeverOverwrite) {
  const fs::path root = aml::testing::scratch_dir("cli_det");
  const fs::path data = gen(root, {"--nodes", "60"});
  const fs::path out = root / "runs";
  const std::vector<std::string> args{"train", "--data", data.string(), "--out", out.string(),
                                      "--epochs", "3", "--dim", "8", "--batch-size", "64"};
  ASSERT_EQ(run(args).code, kOk);
  ASSERT_EQ(run(args).code, kOk);
  for (const char* name : {"run", "run-1"}) {
    for (const char* f : {"config.txt", "train_log.csv", "summary.json", "checkpoint.bin", "curve.csv"})
      EXPECT_TRUE(fs::exists(out / name / f)) << name << "/" << f;
  }
  EXPECT_EQ(column(out / "run" / "train_log.csv", 1), column(out / "run-1" / "train_log.csv", 1));
  EXPECT_EQ(slurp(out / "run" / "checkpoint.bin"), slurp(out / "run-1" / "checkpoint.bin"));
  EXPECT_EQ(slurp(out / "run" / "config.txt"), slurp(out / "run-1" / "config.txt"));

  const Result e = run({"eval", "--run", (out / "run").string()});
  ASSERT_EQ(e.code, kOk) << e.err;
  const json j = json::parse(e.out);
  const json s = json::parse(slurp(out / "run" / "summary.json"));
  EXPECT_EQ(j["value"].get<double>(), s["test_metric"].get<double>());
}

TEST(Cli, ConfigFileAndFlagsMerge) {
  const fs::path dir = aml::testing::scratch_dir("cli_config");
  {
    std::ofstream f(dir / "c.txt");
    f << "# comment\nepochs = 7\nvariant=aml_r   # trailing\nlr=0.5\n";
  }
  RunConfig c = load_config_file(dir / "c.txt");
  EXPECT_EQ(c.train.epochs, 7);
  EXPECT_EQ(c.train.model.variant, model::Variant::AmlR);
  apply_overrides(c, {{"lr", "0.25"}, {"fanout", "5,3"}});
  EXPECT_EQ(c.train.lr, 0.25);
  EXPECT_EQ(c.train.model.fanout, (std::vector<int>{5, 3}));
  const RunConfig back = parse_config_text(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  try {
    parse_config_text("epochs=1\n\nlayers=two\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("nonsense\n"), ParseError);
  EXPECT_THROW(parse_config_text("colour=blue\n"), ConfigError);
  EXPECT_EQ(config_keys().size(), 26u);
}

TEST(Cli, UniqueRunDirectories) {
  const fs::path out = aml::testing::scratch_dir("cli_unique");
  EXPECT_EQ(unique_run_dir(out, "x").filename(), "x");
  EXPECT_EQ(unique_run_dir(out, "x").filename(), "x-1");
  EXPECT_EQ(unique_run_dir(out, "x").filename(), "x-2");
}

TEST(Gen, FilesRoundTripAndAreReproducible) {
  const fs::path root = aml::testing::scratch_dir("gen_twice");
  const fs::path a = gen(root / "a", {"--nodes", "200", "--blocks", "2"});
  const fs::path b = gen(root / "b", {"--nodes", "200", "--blocks", "2"});
  for (const char* f : {"features.bin", "graph.tsv", "train.tsv", "valid.tsv", "test.tsv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  graph::SyntheticSpec spec;
  spec.nodes = 200;
  spec.blocks = 2;
  const graph::SyntheticData want = graph::generate_synthetic(spec, 3);
  const Dataset got = load_dataset(a);
  EXPECT_EQ(got.num_nodes(), 200);
  EXPECT_EQ(got.train.pairs(), want.train.pairs());
  EXPECT_EQ(got.test.pairs(), want.test.pairs());
  EXPECT_EQ(got.test.labels(), want.test.labels());
  EXPECT_EQ(got.features, want.features);
  EXPECT_EQ(got.graph, want.graph);
}

TEST(Gen, NoCrossBlockEdgesWithoutPOut) {
  const fs::path root = aml::testing::scratch_dir("gen_pout");
  const fs::path a = gen(root, {"--nodes", "120", "--blocks", "3", "--p-out", "0", "--p-in", "0.2"});
  graph::SyntheticSpec spec;
  spec.nodes = 120;
  spec.blocks = 3;
  spec.p_out = 0;
  spec.p_in = 0.2;
  const graph::SyntheticData d = graph::generate_synthetic(spec, 3);
  const graph::CsrGraph g = graph::load_edge_list(a / "graph.tsv", 120);
  ASSERT_GT(g.nnz(), 0);
  for (graph::NodeId i = 0; i < 120; ++i)
    for (graph::NodeId j : g.neighbors(i)) EXPECT_EQ(d.block[static_cast<std::size_t>(i)], d.block[static_cast<std::size_t>(j)]);
}

TEST(Compare, RowsAblationsAndCounterRatio) {
  const fs::path root = aml::testing::scratch_dir("cmp");
  const fs::path data = gen(root, {"--nodes", "150", "--p-in", "0.15", "--p-out", "0.02"});
  const fs::path out = root / "runs";
  const Result r = run({"compare", "--data", data.string(), "--out", out.string(), "--epochs", "2",
                        "--dim", "8", "--batch-size", "64", "--seeds", "2", "--ablations"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const fs::path csv = out / "compare" / "comparison.csv";
  const auto labels = column(csv, 0);
  ASSERT_EQ(labels.size(), 4u + 8u);
  const std::vector<std::string> want{"AML", "AML", "SAGE", "SAGE", "AML (w/o KT)", "AML (w/o KT)",
                                      "AML (w/o Δ(L))", "AML (w/o Δ(L))", "AML (w/o HO)", "AML (w/o HO)",
                                      "AML (w/o PE)", "AML (w/o PE)"};
  EXPECT_EQ(labels, want);
  for (const auto& s : column(csv, 9)) EXPECT_EQ(s, "ok");

  const auto variants = column(csv, 1);
  const auto seeds = column(csv, 2);
  const auto metric = column(csv, 3);
  const auto mean = column(csv, 4);
  const auto gnn = column(csv, 7);
  EXPECT_EQ(variants[0], "aml");
  EXPECT_EQ(variants[2], "sym_gnn");
  EXPECT_EQ(seeds[0], "0");
  EXPECT_EQ(seeds[1], "1");
  EXPECT_NEAR(std::stod(mean[0]), (std::stod(metric[0]) + std::stod(metric[1])) / 2, 1e-12);

  const Dataset d = load_dataset(data);
  const double density = static_cast<double>(d.train.size()) / d.num_nodes();
  EXPECT_GE(std::stod(gnn[2]) / std::stod(gnn[0]), density);

  // Same seed through train reproduces the comparison's metric.
  const fs::path single = root / "single";
  ASSERT_EQ(run({"train", "--data", data.string(), "--out", single.string(), "--epochs", "2", "--dim",
                 "8", "--batch-size", "64", "--seed", "1"})
                .code,
            kOk);
  const json s = json::parse(slurp(single / "run" / "summary.json"));
  EXPECT_EQ(s["final_metric"].get<double>(), std::stod(metric[1]));
}

TEST(Compare, FailedSubRunGivesNonZeroExit) {
  const fs::path root = aml::testing::scratch_dir("cmp_fail");
  const fs::path data = gen(root, {"--nodes", "40"});
  const fs::path out = root / "runs";
  const Result r = run({"compare", "--data", data.string(), "--out", out.string(), "--epochs", "1",
                        "--variants", "aml,nope"});
  EXPECT_NE(r.code, kOk);
}

}  // namespace
}  // namespace aml::cli
