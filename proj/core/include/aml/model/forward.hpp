#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aml/core/matrix.hpp"
#include "aml/core/random.hpp"
#include "aml/cost/cost_meter.hpp"
#include "aml/graph/csr_graph.hpp"
#include "aml/graph/pre_encoding.hpp"
#include "aml/model/config.hpp"
#include "aml/model/params.hpp"
#include "aml/nn/tape.hpp"

namespace aml::model {

using graph::Edge;
using graph::NodeId;

// What the forward paths read: the normalized operator used by message
// passing, raw features and (when the plan needs it) the cached pre-encoding.
struct GraphContext {
  graph::CsrGraph adjacency;
  Matrix features;
  std::optional<graph::PreEncoding> pre;
};

// Orients (transposes for tail-side message passing), optionally adds
// self-loops, normalizes and pre-encodes.
GraphContext make_context(const graph::CsrGraph& graph, Matrix features,
                          const ModelConfig& config, graph::PreEncodingCache* cache = nullptr);

struct ForwardOptions {
  bool training = false;
  // Neighbour sampling source; null means full neighbourhoods regardless of
  // the configured fanout.
  Rng* fanout_rng = nullptr;
  cost::CostMeter* meter = nullptr;
};

// Rows of a representation block together with the node each row belongs to.
struct NodeRows {
  nn::Var rows;
  std::vector<NodeId> nodes;
};

struct HeadTailReps {
  NodeRows head;  // U
  NodeRows tail;  // V
};

// Message-passing path over the L-hop cone of `nodes` (distinct ids).
nn::Var head_forward(nn::Tape& tape, const GraphContext& ctx, std::span<const NodeId> nodes,
                     ModelParams& params, const ModelConfig& config,
                     const ForwardOptions& options);

// Pre-encoded MLP path, with the residual branch when enabled.
nn::Var tail_forward(nn::Tape& tape, const GraphContext& ctx, std::span<const NodeId> nodes,
                     ModelParams& params, const ModelConfig& config,
                     const ForwardOptions& options);

// U = U_L (+ V_L on the same nodes when homophily), V = V_L on tails.
HeadTailReps compose(nn::Tape& tape, const NodeRows& u_l, const NodeRows& v_l_heads,
                     const NodeRows& v_l_tails, bool homophily);

// One logit per pair from U_head ⊙ V_tail.
nn::Var predict(nn::Tape& tape, const HeadTailReps& reps, std::span<const Edge> pairs,
                ModelParams& params, PredictorKind kind);

// Sorted distinct heads / tails of a pair list.
std::vector<NodeId> distinct_heads(std::span<const Edge> pairs);
std::vector<NodeId> distinct_tails(std::span<const Edge> pairs);

}  // namespace aml::model
