#include "aml/graph/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "aml/core/error.hpp"
#include "aml/core/random.hpp"

namespace aml::graph {

namespace {

void validate(const SyntheticSpec& s) {
  auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (s.nodes < 1) throw ConfigError("synthetic: nodes must be >= 1");
  if (s.kind == SyntheticKind::Chain && s.nodes < 2) throw ConfigError("chain needs >= 2 nodes");
  if (s.kind == SyntheticKind::Sbm) {
    if (s.blocks < 1 || s.blocks > s.nodes) throw ConfigError("sbm: blocks must be in [1, nodes]");
    if (!prob(s.p_in) || !prob(s.p_out)) throw ConfigError("sbm: p_in/p_out must be in [0,1]");
  }
  if (s.kind == SyntheticKind::Erdos && !prob(s.p)) throw ConfigError("erdos: p must be in [0,1]");
  if (s.feature_dim < 1) throw ConfigError("synthetic: feature_dim must be >= 1");
  if (!prob(s.feature_noise)) throw ConfigError("synthetic: feature_noise must be in [0,1]");
  if (s.valid_frac < 0 || s.test_frac < 0 || s.valid_frac + s.test_frac >= 1.0) {
    throw ConfigError("synthetic: valid_frac + test_frac must be in [0, 1)");
  }
  if (s.eval_negatives < 0) throw ConfigError("synthetic: eval_negatives must be >= 0");
}

std::vector<int> assign_blocks(const SyntheticSpec& s) {
  std::vector<int> block(s.nodes, 0);
  if (s.kind != SyntheticKind::Sbm) return block;
  // Contiguous, balanced blocks.
  for (NodeId i = 0; i < s.nodes; ++i)
    block[i] = static_cast<int>(static_cast<std::int64_t>(i) * s.blocks / s.nodes);
  return block;
}

// Undirected links as (lo, hi) with lo < hi.
std::vector<Edge> draw_links(const SyntheticSpec& s, const std::vector<int>& block, Rng& rng) {
  std::vector<Edge> links;
  const NodeId n = s.nodes;
  switch (s.kind) {
    case SyntheticKind::Chain:
      for (NodeId i = 0; i + 1 < n; ++i) links.push_back({i, i + 1});
      break;
    case SyntheticKind::Star:
      for (NodeId i = 1; i < n; ++i) links.push_back({0, i});
      break;
    case SyntheticKind::Erdos:
    case SyntheticKind::Sbm: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
          double p = s.p;
          if (s.kind == SyntheticKind::Sbm) p = block[i] == block[j] ? s.p_in : s.p_out;
          if (u(rng) < p) links.push_back({i, j});
        }
      }
      break;
    }
  }
  return links;
}

EdgeSet eval_split(NodeId n, const std::vector<Edge>& positives, const CsrGraph& full,
                   int negatives_per_positive, Rng& rng) {
  std::vector<Edge> pairs;
  std::vector<std::uint8_t> labels;
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  for (const Edge& e : positives) {
    pairs.push_back(e);
    labels.push_back(1);
    for (int k = 0; k < negatives_per_positive; ++k) {
      for (int attempt = 0; attempt < 100; ++attempt) {
        const NodeId t = pick(rng);
        if (t == e.head || full.has_edge(e.head, t)) continue;
        pairs.push_back({e.head, t});
        labels.push_back(0);
        break;
      }
    }
  }
  return EdgeSet(n, std::move(pairs), std::move(labels));
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng graph_rng = stream_rng(seed, "data.graph");
  Rng split_rng = stream_rng(seed, "data.split");
  Rng feature_rng = stream_rng(seed, "data.features");
  Rng negative_rng = stream_rng(seed, "data.negatives");

  SyntheticData data;
  data.block = assign_blocks(spec);
  std::vector<Edge> links = draw_links(spec, data.block, graph_rng);

  std::vector<Edge> both;
  both.reserve(2 * links.size());
  for (const Edge& e : links) {
    both.push_back(e);
    both.push_back({e.tail, e.head});
  }
  const CsrGraph full = CsrGraph::from_edges(spec.nodes, both);

  std::shuffle(links.begin(), links.end(), split_rng);
  const auto m = links.size();
  const auto n_test = static_cast<std::size_t>(spec.test_frac * static_cast<double>(m));
  const auto n_valid = static_cast<std::size_t>(spec.valid_frac * static_cast<double>(m));
  std::vector<Edge> test(links.begin(), links.begin() + n_test);
  std::vector<Edge> valid(links.begin() + n_test, links.begin() + n_test + n_valid);
  std::vector<Edge> train(links.begin() + n_test + n_valid, links.end());
  std::sort(test.begin(), test.end());
  std::sort(valid.begin(), valid.end());

  data.train = symmetrize(EdgeSet(spec.nodes, train));
  data.graph = CsrGraph::from_edges(spec.nodes, data.train.pairs());
  data.valid = eval_split(spec.nodes, valid, full, spec.eval_negatives, negative_rng);
  data.test = eval_split(spec.nodes, test, full, spec.eval_negatives, negative_rng);

  if (spec.features == FeatureKind::Gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    data.features = Matrix(spec.nodes, spec.feature_dim);
    for (double& x : data.features.data()) x = normal(feature_rng);
  } else {
    const int width = std::max(spec.blocks, 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> any_block(0, width - 1);
    data.features = Matrix(spec.nodes, width);
    for (NodeId i = 0; i < spec.nodes; ++i) {
      int b = data.block[i];
      if (u(feature_rng) < spec.feature_noise) b = any_block(feature_rng);
      data.features(i, b) = 1.0;
    }
  }
  return data;
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "sbm") return SyntheticKind::Sbm;
  if (name == "chain") return SyntheticKind::Chain;
  if (name == "star") return SyntheticKind::Star;
  if (name == "erdos") return SyntheticKind::Erdos;
  throw ConfigError("unknown synthetic kind '" + std::string(name) +
                    "' (expected sbm|chain|star|erdos)");
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "gaussian") return FeatureKind::Gaussian;
  if (name == "noisy_block" || name == "noisy_block_onehot") return FeatureKind::NoisyBlockOneHot;
  throw ConfigError("unknown feature kind '" + std::string(name) +
                    "' (expected gaussian|noisy_block)");
}

}  // namespace aml::graph
