#include "aml/model/forward.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "aml/core/error.hpp"

namespace aml::model {

namespace {

void check_nodes(std::span<const NodeId> nodes, NodeId num_nodes, const char* what) {
  for (NodeId n : nodes) {
    if (n < 0 || n >= num_nodes) {
      throw BoundsError(std::string(what) + ": node " + std::to_string(n) + " outside [0, " +
                        std::to_string(num_nodes) + ")");
    }
  }
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument(std::string(what) + ": node list has duplicates");
  }
}

// sets[l] are the rows needed at layer l; sets[L] is the target list and every
// sets[l] starts with sets[l+1] in the same order. ops[l] maps sets[l-1] onto
// sets[l].
struct Cone {
  std::vector<std::vector<NodeId>> sets;
  std::vector<nn::SparseRows> ops;
};

Cone build_cone(const graph::CsrGraph& adj, std::span<const NodeId> targets,
                const ModelConfig& config, Rng* rng) {
  const int L = config.layers;
  Cone cone;
  cone.sets.resize(static_cast<std::size_t>(L) + 1);
  cone.ops.resize(static_cast<std::size_t>(L) + 1);
  cone.sets[L].assign(targets.begin(), targets.end());
  std::vector<std::int32_t> pos(static_cast<std::size_t>(adj.num_nodes()), -1);
  std::vector<std::size_t> pick;
  for (int l = L; l >= 1; --l) {
    const auto& outer = cone.sets[l];
    auto& inner = cone.sets[l - 1];
    inner = outer;
    for (std::size_t i = 0; i < inner.size(); ++i) pos[inner[i]] = static_cast<std::int32_t>(i);
    nn::SparseRows op;
    op.num_rows = outer.size();
    const int cap = config.fanout_at(l);
    for (NodeId n : outer) {
      auto nbrs = adj.neighbors(n);
      auto wts = adj.weights(n);
      const std::size_t deg = nbrs.size();
      pick.resize(deg);
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      double scale = 1.0;
      if (rng != nullptr && cap > 0 && deg > static_cast<std::size_t>(cap)) {
        std::vector<std::size_t> chosen;
        chosen.reserve(static_cast<std::size_t>(cap));
        std::sample(pick.begin(), pick.end(), std::back_inserter(chosen), cap, *rng);
        pick.swap(chosen);
        scale = static_cast<double>(deg) / cap;
      }
      for (std::size_t k : pick) {
        const NodeId m = nbrs[k];
        if (pos[m] < 0) {
          pos[m] = static_cast<std::int32_t>(inner.size());
          inner.push_back(m);
        }
        op.cols.push_back(pos[m]);
        op.weights.push_back(wts[k] * scale);
      }
      op.offsets.push_back(static_cast<std::int64_t>(op.cols.size()));
    }
    op.num_cols = inner.size();
    for (NodeId m : inner) pos[m] = -1;
    cone.ops[l] = std::move(op);
  }
  return cone;
}

}  // namespace

GraphContext make_context(const graph::CsrGraph& graph, Matrix features,
                          const ModelConfig& config, graph::PreEncodingCache* cache) {
  const ForwardPlan plan = variant_wire(config);
  if (features.rows() != static_cast<std::size_t>(graph.num_nodes())) {
    throw ShapeError("feature matrix has " + std::to_string(features.rows()) +
                     " rows for a graph of " + std::to_string(graph.num_nodes()) + " nodes");
  }
  graph::CsrGraph g = plan.transposed_graph ? graph.transpose() : graph;
  if (config.self_loops) g = g.with_self_loops();
  GraphContext ctx;
  ctx.adjacency = graph::normalize(g, config.norm);
  if (plan.needs_pre_encoding) {
    ctx.pre = cache != nullptr ? cache->get(ctx.adjacency, config.norm, features, config.layers)
                               : graph::pre_encode(ctx.adjacency, features, config.layers);
  }
  ctx.features = std::move(features);
  return ctx;
}

nn::Var head_forward(nn::Tape& tape, const GraphContext& ctx, std::span<const NodeId> nodes,
                     ModelParams& params, const ModelConfig& config,
                     const ForwardOptions& options) {
  check_nodes(nodes, ctx.adjacency.num_nodes(), "head_forward");
  if (params.layers.size() != static_cast<std::size_t>(config.layers)) {
    throw ConfigError("parameters hold " + std::to_string(params.layers.size()) +
                      " layers, config asks for " + std::to_string(config.layers));
  }
  Cone cone = build_cone(ctx.adjacency, nodes, config, options.fanout_rng);
  const int L = config.layers;

  nn::Var u = tape.constant(gather_rows(ctx.features, cone.sets[0]));
  std::int64_t layer_rows = 0;
  for (int l = 1; l <= L; ++l) {
    LayerParams& lp = params.layers[static_cast<std::size_t>(l - 1)];
    const std::size_t rows = cone.sets[l].size();
    layer_rows += static_cast<std::int64_t>(rows);
    nn::Var agg = tape.aggregate(u, std::move(cone.ops[l]));
    nn::Var self = u;
    if (rows != cone.sets[l - 1].size()) {
      std::vector<std::int32_t> prefix(rows);
      std::iota(prefix.begin(), prefix.end(), 0);
      self = tape.gather_rows(u, std::move(prefix));
    }
    nn::Var pre = tape.add(tape.matmul(agg, tape.param(lp.w1)), tape.matmul(self, tape.param(lp.w2)));
    if (lp.head_norm && l < L) pre = tape.branch_norm(pre, *lp.head_norm, options.training);
    u = tape.activate(pre, config.activation);
  }
  cost::record(options.meter, cost::CostEvent::GnnNode, static_cast<std::int64_t>(nodes.size()));
  cost::record(options.meter, cost::CostEvent::GnnLayerRow, layer_rows);
  return u;
}

nn::Var tail_forward(nn::Tape& tape, const GraphContext& ctx, std::span<const NodeId> nodes,
                     ModelParams& params, const ModelConfig& config,
                     const ForwardOptions& options) {
  check_nodes(nodes, static_cast<NodeId>(ctx.features.rows()), "tail_forward");
  const ForwardPlan plan = variant_wire(config);
  const Toggles& t = plan.effective;
  if (params.layers.size() != static_cast<std::size_t>(config.layers)) {
    throw ConfigError("parameters hold " + std::to_string(params.layers.size()) +
                      " layers, config asks for " + std::to_string(config.layers));
  }
  if (t.pre_encode && (!ctx.pre || ctx.pre->layers != config.layers)) {
    throw ConfigError("tail_forward: pre-encoding missing or built for a different layer count");
  }
  const std::vector<std::int32_t> rows(nodes.begin(), nodes.end());
  const Matrix& source = t.pre_encode ? ctx.pre->v0 : ctx.features;
  const int L = config.layers;

  nn::Var v = tape.constant(gather_rows(source, rows));
  for (int l = 1; l <= L; ++l) {
    LayerParams& lp = params.layers[static_cast<std::size_t>(l - 1)];
    nn::Param* w1 = &lp.w1;
    nn::Param* w2 = &lp.w2;
    if (!t.knowledge_transfer) {
      if (!lp.tail_w1 || !lp.tail_w2) {
        throw ConfigError("tail_forward: knowledge transfer is off but no tail weights exist");
      }
      w1 = &*lp.tail_w1;
      w2 = &*lp.tail_w2;
    }
    nn::Var pre = tape.add(tape.matmul(v, tape.param(*w1)), tape.matmul(v, tape.param(*w2)));
    if (lp.tail_norm && l < L) pre = tape.branch_norm(pre, *lp.tail_norm, options.training);
    v = tape.activate(pre, config.activation);
  }
  if (t.residual_delta) {
    nn::Var d = tape.constant(gather_rows(ctx.pre->delta0, rows));
    for (int l = 1; l <= L; ++l) {
      LayerParams& lp = params.layers[static_cast<std::size_t>(l - 1)];
      if (!lp.delta) throw ConfigError("tail_forward: residual path is on but has no weights");
      d = tape.activate(tape.matmul(d, tape.param(*lp.delta)), config.activation);
    }
    v = tape.add(v, d);
  }
  cost::record(options.meter, cost::CostEvent::MlpNode, static_cast<std::int64_t>(nodes.size()));
  return v;
}

HeadTailReps compose(nn::Tape& tape, const NodeRows& u_l, const NodeRows& v_l_heads,
                     const NodeRows& v_l_tails, bool homophily) {
  auto check_rows = [&](const NodeRows& r, const char* what) {
    if (tape.value(r.rows).rows() != r.nodes.size()) {
      throw ShapeError(std::string("compose: ") + what + " has " +
                       std::to_string(tape.value(r.rows).rows()) + " rows for " +
                       std::to_string(r.nodes.size()) + " nodes");
    }
  };
  check_rows(u_l, "U");
  check_rows(v_l_tails, "V(tails)");
  HeadTailReps reps{u_l, v_l_tails};
  if (homophily) {
    check_rows(v_l_heads, "V(heads)");
    if (u_l.nodes != v_l_heads.nodes) {
      throw std::invalid_argument("compose: U and V(heads) rows are not aligned to the same nodes");
    }
    reps.head.rows = tape.add(u_l.rows, v_l_heads.rows);
  }
  return reps;
}

nn::Var predict(nn::Tape& tape, const HeadTailReps& reps, std::span<const Edge> pairs,
                ModelParams& params, PredictorKind kind) {
  auto index_of = [](const std::vector<NodeId>& nodes) {
    std::unordered_map<NodeId, std::int32_t> idx;
    idx.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) idx.emplace(nodes[i], static_cast<std::int32_t>(i));
    return idx;
  };
  const auto hidx = index_of(reps.head.nodes);
  const auto tidx = index_of(reps.tail.nodes);
  std::vector<std::int32_t> hrows, trows;
  hrows.reserve(pairs.size());
  trows.reserve(pairs.size());
  for (const Edge& e : pairs) {
    auto h = hidx.find(e.head);
    auto t = tidx.find(e.tail);
    if (h == hidx.end() || t == tidx.end()) {
      throw BoundsError("predict: pair (" + std::to_string(e.head) + ", " +
                        std::to_string(e.tail) + ") has no representation");
    }
    hrows.push_back(h->second);
    trows.push_back(t->second);
  }
  nn::Var z = tape.hadamard(tape.gather_rows(reps.head.rows, std::move(hrows)),
                            tape.gather_rows(reps.tail.rows, std::move(trows)));
  if (kind == PredictorKind::Sum) return tape.row_sum(z);
  nn::Var h = tape.relu(tape.add_row_bias(tape.matmul(z, tape.param(params.theta1)),
                                          tape.param(params.bias1)));
  return tape.add_row_bias(tape.matmul(h, tape.param(params.theta2)), tape.param(params.bias2));
}

std::vector<NodeId> distinct_heads(std::span<const Edge> pairs) {
  std::vector<NodeId> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) out.push_back(e.head);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> distinct_tails(std::span<const Edge> pairs) {
  std::vector<NodeId> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) out.push_back(e.tail);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace aml::model
