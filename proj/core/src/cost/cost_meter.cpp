#include "aml/cost/cost_meter.hpp"

#include <cmath>
#include <string>

#include "aml/core/error.hpp"

namespace aml::cost {

void CostMeter::record(CostEvent event, std::int64_t magnitude) {
  if (magnitude < 0) {
    throw std::invalid_argument("cost magnitude must be non-negative, got " +
                                std::to_string(magnitude));
  }
  switch (event) {
    case CostEvent::GnnNode: counters_.gnn_nodes += magnitude; break;
    case CostEvent::GnnLayerRow: counters_.gnn_layer_rows += magnitude; break;
    case CostEvent::MlpNode: counters_.mlp_nodes += magnitude; break;
    case CostEvent::Spmm: counters_.spmm_flops += magnitude; break;
    case CostEvent::Dense: counters_.dense_flops += magnitude; break;
  }
}

double predict_epoch_cost(const GraphStats& st, Method method, Batching batching) {
  if (st.num_nodes <= 0 || st.num_edges <= 0 || st.avg_degree <= 0 || st.layers <= 0 ||
      st.hidden <= 0) {
    throw ConfigError("predict_epoch_cost: statistics must be positive");
  }
  const double n = st.num_nodes;
  const double e = st.num_edges;
  const double r2 = st.hidden * st.hidden;
  const double hops = st.hops > 0 ? st.hops : st.layers;
  const double gnn_node = std::pow(st.avg_degree, st.layers) * r2;  // C
  const double mlp_node = st.layers * r2;                           // M

  switch (method) {
    case Method::Local:
      // Subgraph extraction per link; row-wise batching does not help.
      return 2.0 * st.layers * std::pow(st.avg_degree, hops) * r2 * e;
    case Method::Global:
      return batching == Batching::EdgeWise ? 2.0 * gnn_node * e : gnn_node * (e + n);
    case Method::Aml:
      return batching == Batching::EdgeWise ? (gnn_node + mlp_node) * e
                                            : gnn_node * n + mlp_node * e;
  }
  return 0.0;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Local: return "local";
    case Method::Global: return "global";
    case Method::Aml: return "aml";
  }
  return "?";
}

std::string_view to_string(Batching b) {
  return b == Batching::RowWise ? "rowwise" : "edgewise";
}

}  // namespace aml::cost
