#include <benchmark/benchmark.h>

#include "aml/graph/synthetic.hpp"
#include "aml/model/model.hpp"
#include "aml/train/trainer.hpp"

namespace {

using namespace aml;

graph::SyntheticData erdos(graph::NodeId n, double density, int dim) {
  graph::SyntheticSpec s;
  s.kind = graph::SyntheticKind::Erdos;
  s.nodes = n;
  s.p = density / (n - 1);
  s.feature_dim = dim;
  s.valid_frac = 0.0;
  s.test_frac = 0.0;
  return graph::generate_synthetic(s, 1);
}

void BM_Spmm(benchmark::State& state) {
  const auto d = erdos(static_cast<graph::NodeId>(state.range(0)), static_cast<double>(state.range(1)), 32);
  const graph::CsrGraph a = graph::normalize(d.graph, graph::NormMode::Row);
  for (auto _ : state) benchmark::DoNotOptimize(graph::spmm(a, d.features));
  state.counters["nnz"] = static_cast<double>(a.nnz());
  state.SetItemsProcessed(state.iterations() * a.nnz() * 32);
}
BENCHMARK(BM_Spmm)->Args({5000, 8})->Args({5000, 32})->Args({20000, 8})->Unit(benchmark::kMicrosecond);

// Per-node representation cost: message passing (C) against the
// pre-encoded MLP path (M), same weights, 256 target nodes.
void node_paths(benchmark::State& state, bool gnn) {
  const auto d = erdos(5000, static_cast<double>(state.range(0)), 32);
  model::ModelConfig c;
  c.layers = static_cast<int>(state.range(1));
  c.hidden = 32;
  c.input_dim = 32;
  const model::GraphContext ctx = model::make_context(d.graph, d.features, c);
  model::ModelParams p(c, 0);
  std::vector<graph::NodeId> nodes(256);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<graph::NodeId>(i * 19);
  for (auto _ : state) {
    nn::Tape t(false);
    benchmark::DoNotOptimize(gnn ? model::head_forward(t, ctx, nodes, p, c, {})
                                 : model::tail_forward(t, ctx, nodes, p, c, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nodes.size()));
}
void BM_GnnNodes(benchmark::State& s) { node_paths(s, true); }
void BM_MlpNodes(benchmark::State& s) { node_paths(s, false); }
BENCHMARK(BM_GnnNodes)->ArgsProduct({{4, 16}, {1, 2}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MlpNodes)->ArgsProduct({{4, 16}, {1, 2}})->Unit(benchmark::kMicrosecond);

// One training epoch: AML row-wise against SymmetricGNN edge-wise.
void epoch(benchmark::State& state, model::Variant v, sampling::Strategy s) {
  const auto d = erdos(2000, static_cast<double>(state.range(0)), 16);
  train::TrainConfig c;
  c.epochs = 1;
  c.sampler.strategy = s;
  c.sampler.batch_size = 512;
  c.model.variant = v;
  c.model.hidden = 16;
  model::Model m(c.model, d.graph, d.features, 0);
  train::Trainer t(c, m, d.train);
  std::int64_t gnn = 0;
  for (auto _ : state) gnn = t.train_epoch().counters.gnn_nodes;
  state.counters["gnn_nodes"] = static_cast<double>(gnn);
}
void BM_EpochAmlRowWise(benchmark::State& s) { epoch(s, model::Variant::Aml, sampling::Strategy::RowWise); }
void BM_EpochSymEdgeWise(benchmark::State& s) {
  epoch(s, model::Variant::SymmetricGnn, sampling::Strategy::EdgeWise);
}
BENCHMARK(BM_EpochAmlRowWise)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpochSymEdgeWise)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
