#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aml/graph/edge_set.hpp"

namespace aml::model {
class Model;
}

namespace aml::eval {

using graph::Edge;

// Fraction of positives scoring strictly above the K-th largest negative.
// K larger than the pool makes every positive a hit. Throws on an empty pool
// or an empty positive list.
double hits_at_k(std::span<const double> pos_scores, std::span<const double> neg_scores,
                 std::size_t k);

// 1 / (1 + #{neg >= pos}); ties count against the positive.
double mrr(double pos_score, std::span<const double> candidate_neg_scores);

enum class MetricKind { Hits, Mrr };

struct MetricSpec {
  MetricKind kind = MetricKind::Hits;
  std::size_t k = 10;

  std::string name() const;
};

// "hits@K" or "mrr".
MetricSpec parse_metric(std::string_view text);

// Positives and negatives of an evaluation split. Hits@K ranks every positive
// against the shared negative pool; MRR ranks positive (i, j) against the
// negatives whose head is i (the whole pool when i has none).
struct EvalSplit {
  std::vector<Edge> positives;
  std::vector<Edge> negatives;

  static EvalSplit from_edge_set(const graph::EdgeSet& split);
  bool empty() const { return positives.empty() || negatives.empty(); }
};

// Applies the metric to precomputed scores, aligned with split.positives and
// split.negatives.
double metric_from_scores(const EvalSplit& split, std::span<const double> pos_scores,
                          std::span<const double> neg_scores, const MetricSpec& spec);

// Scores every pair in inference mode and applies the metric.
double evaluate(model::Model& model, const EvalSplit& split, const MetricSpec& spec);

}  // namespace aml::eval
