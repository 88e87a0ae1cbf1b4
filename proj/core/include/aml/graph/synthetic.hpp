#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aml/core/matrix.hpp"
#include "aml/graph/csr_graph.hpp"
#include "aml/graph/edge_set.hpp"

namespace aml::graph {

enum class SyntheticKind { Sbm, Chain, Star, Erdos };
enum class FeatureKind {
  Gaussian,          // iid standard normal, feature_dim columns
  NoisyBlockOneHot,  // one-hot of the block label, relabelled at random with prob feature_noise
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Sbm;
  NodeId nodes = 100;
  int blocks = 2;        // sbm
  double p_in = 0.1;     // sbm
  double p_out = 0.01;   // sbm
  double p = 0.05;       // erdos
  int feature_dim = 16;
  FeatureKind features = FeatureKind::Gaussian;
  double feature_noise = 0.2;
  double valid_frac = 0.1;
  double test_frac = 0.1;
  int eval_negatives = 1;  // corrupted-tail negatives per evaluation positive
};

// Undirected links are split into train/valid/test without overlap. The
// adjacency holds training links only, in both directions. Evaluation splits
// list each held-out link once (head < tail) followed by label-0 pairs
// (head, t) that are not links of the full graph.
struct SyntheticData {
  CsrGraph graph;
  Matrix features;
  EdgeSet train;  // directed training pairs, symmetrized
  EdgeSet valid;
  EdgeSet test;
  std::vector<int> block;  // block label per node (all zero for non-sbm kinds)
};

// Deterministic for a fixed seed. Throws ConfigError on invalid specs.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

SyntheticKind parse_synthetic_kind(std::string_view name);
FeatureKind parse_feature_kind(std::string_view name);

}  // namespace aml::graph
