#pragma once

#include <cstdint>
#include <string_view>

namespace aml::cost {

// Per-epoch tallies of representation work.
//
// gnn_nodes counts output representations produced by the message-passing
// path (one per target node per call), mlp_nodes counts rows pushed through
// the pre-encoded MLP path. gnn_layer_rows counts every row evaluated at every
// message-passing layer, i.e. the expanded computation cone, which is where
// the s^L factor shows up.
struct CostCounters {
  std::int64_t gnn_nodes = 0;
  std::int64_t gnn_layer_rows = 0;
  std::int64_t mlp_nodes = 0;
  std::int64_t spmm_flops = 0;
  std::int64_t dense_flops = 0;

  friend bool operator==(const CostCounters&, const CostCounters&) = default;
};

enum class CostEvent { GnnNode, GnnLayerRow, MlpNode, Spmm, Dense };

// Context-local accumulator. Not thread-safe; one per training context.
class CostMeter {
 public:
  // magnitude must be non-negative.
  void record(CostEvent event, std::int64_t magnitude = 1);
  void reset() { counters_ = {}; }
  const CostCounters& counters() const { return counters_; }

 private:
  CostCounters counters_;
};

// Records into a possibly-null meter.
inline void record(CostMeter* meter, CostEvent event, std::int64_t magnitude) {
  if (meter != nullptr) meter->record(event, magnitude);
}

struct GraphStats {
  double num_nodes = 0;   // N
  double num_edges = 0;   // |E|, training links
  double avg_degree = 0;  // s = nnz(A) / N
  double layers = 0;      // L
  double hidden = 0;      // r
  double hops = 0;        // k, subgraph radius for local methods (defaults to L)
};

enum class Method { Local, Global, Aml };
enum class Batching { RowWise, EdgeWise };

// Asymptotic per-epoch cost with all hidden constants set to one. Only ratios
// between methods are meaningful.
double predict_epoch_cost(const GraphStats& stats, Method method, Batching batching);

std::string_view to_string(Method m);
std::string_view to_string(Batching b);

}  // namespace aml::cost
