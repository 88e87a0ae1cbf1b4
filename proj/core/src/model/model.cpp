#include "aml/model/model.hpp"

#include <algorithm>
#include <iterator>

namespace aml::model {

namespace {

ModelConfig with_input_dim(ModelConfig config, const Matrix& features) {
  if (config.input_dim == 0) config.input_dim = static_cast<int>(features.cols());
  return config;
}

std::vector<NodeId> merge(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Rows of `all` (sorted) for the sorted subset `nodes`.
nn::Var select(nn::Tape& tape, const NodeRows& all, const std::vector<NodeId>& nodes) {
  if (nodes.size() == all.nodes.size()) return all.rows;
  std::vector<std::int32_t> idx;
  idx.reserve(nodes.size());
  auto it = all.nodes.begin();
  for (NodeId n : nodes) {
    it = std::lower_bound(it, all.nodes.end(), n);
    idx.push_back(static_cast<std::int32_t>(it - all.nodes.begin()));
  }
  return tape.gather_rows(all.rows, std::move(idx));
}

}  // namespace

Model::Model(ModelConfig config, const graph::CsrGraph& train_graph, Matrix features,
             std::uint64_t seed, graph::PreEncodingCache* cache)
    : config_(with_input_dim(std::move(config), features)),
      plan_(variant_wire(config_)),
      ctx_(make_context(train_graph, std::move(features), config_, cache)),
      params_(config_, seed) {}

Model::Model(ModelConfig config, GraphContext context, std::uint64_t seed)
    : config_(with_input_dim(std::move(config), context.features)),
      plan_(variant_wire(config_)),
      ctx_(std::move(context)),
      params_(config_, seed) {}

nn::Var Model::forward(nn::Tape& tape, std::span<const Edge> pairs,
                       const ForwardOptions& options) {
  const std::vector<NodeId> heads = distinct_heads(pairs);
  const std::vector<NodeId> tails = distinct_tails(pairs);

  auto gnn = [&](const std::vector<NodeId>& nodes) {
    return NodeRows{head_forward(tape, ctx_, nodes, params_, config_, options), nodes};
  };
  auto mlp = [&](const std::vector<NodeId>& nodes) {
    return NodeRows{tail_forward(tape, ctx_, nodes, params_, config_, options), nodes};
  };

  switch (config_.variant) {
    case Variant::Aml: {
      NodeRows u = gnn(heads);
      NodeRows v = mlp(plan_.homophily ? merge(heads, tails) : tails);
      NodeRows v_heads{plan_.homophily ? select(tape, v, heads) : nn::Var{}, heads};
      HeadTailReps reps = compose(tape, u, v_heads, v, plan_.homophily);
      return predict(tape, reps, pairs, params_, config_.predictor);
    }
    case Variant::AmlR: {
      // Same wiring as Aml with the roles of heads and tails exchanged.
      NodeRows u = gnn(tails);
      NodeRows v = mlp(plan_.homophily ? merge(heads, tails) : heads);
      NodeRows v_tails{plan_.homophily ? select(tape, v, tails) : nn::Var{}, tails};
      HeadTailReps reps = compose(tape, u, v_tails, v, plan_.homophily);
      std::vector<Edge> swapped;
      swapped.reserve(pairs.size());
      for (const Edge& e : pairs) swapped.push_back({e.tail, e.head});
      return predict(tape, reps, swapped, params_, config_.predictor);
    }
    case Variant::Smlp: {
      NodeRows v = mlp(merge(heads, tails));
      HeadTailReps reps{v, v};
      return predict(tape, reps, pairs, params_, config_.predictor);
    }
    case Variant::SymmetricGnn: {
      HeadTailReps reps{gnn(heads), gnn(tails)};
      return predict(tape, reps, pairs, params_, config_.predictor);
    }
  }
  return {};
}

std::vector<double> Model::score(std::span<const Edge> pairs) {
  if (pairs.empty()) return {};
  nn::Tape tape(false);
  ForwardOptions options;
  const nn::Var s = forward(tape, pairs, options);
  const Matrix& m = tape.value(s);
  return {m.data().begin(), m.data().end()};
}

}  // namespace aml::model
