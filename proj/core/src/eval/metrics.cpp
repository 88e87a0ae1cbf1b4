#include "aml/eval/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

#include "aml/core/error.hpp"
#include "aml/model/model.hpp"

namespace aml::eval {

double hits_at_k(std::span<const double> pos_scores, std::span<const double> neg_scores,
                 std::size_t k) {
  if (neg_scores.empty()) throw std::invalid_argument("hits_at_k: empty negative pool");
  if (pos_scores.empty()) throw std::invalid_argument("hits_at_k: no positives");
  if (k == 0) throw std::invalid_argument("hits_at_k: K must be >= 1");
  if (k > neg_scores.size()) return 1.0;
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::nth_element(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(k - 1), neg.end(),
                   std::greater<>());
  const double threshold = neg[k - 1];
  std::size_t hits = 0;
  for (double p : pos_scores) hits += p > threshold;
  return static_cast<double>(hits) / static_cast<double>(pos_scores.size());
}

double mrr(double pos_score, std::span<const double> candidate_neg_scores) {
  if (candidate_neg_scores.empty()) throw std::invalid_argument("mrr: no candidates");
  std::size_t above = 0;
  for (double n : candidate_neg_scores) above += n >= pos_score;
  return 1.0 / static_cast<double>(1 + above);
}

std::string MetricSpec::name() const {
  return kind == MetricKind::Mrr ? "mrr" : "hits@" + std::to_string(k);
}

MetricSpec parse_metric(std::string_view text) {
  if (text == "mrr") return {MetricKind::Mrr, 0};
  constexpr std::string_view prefix = "hits@";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec == std::errc() && ptr == num.data() + num.size() && k >= 1) {
      return {MetricKind::Hits, k};
    }
  }
  throw ConfigError("unknown metric '" + std::string(text) + "' (expected hits@K or mrr)");
}

EvalSplit EvalSplit::from_edge_set(const graph::EdgeSet& split) {
  EvalSplit out;
  const auto& pairs = split.pairs();
  const auto& labels = split.labels();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    (labels[i] ? out.positives : out.negatives).push_back(pairs[i]);
  }
  return out;
}

double metric_from_scores(const EvalSplit& split, std::span<const double> pos_scores,
                          std::span<const double> neg_scores, const MetricSpec& spec) {
  if (split.empty()) throw std::invalid_argument("evaluate: split has no positives or no negatives");
  if (pos_scores.size() != split.positives.size() || neg_scores.size() != split.negatives.size()) {
    throw ShapeError("evaluate: score count does not match the split");
  }
  if (spec.kind == MetricKind::Hits) return hits_at_k(pos_scores, neg_scores, spec.k);

  std::map<graph::NodeId, std::vector<double>> by_head;
  for (std::size_t i = 0; i < split.negatives.size(); ++i) {
    by_head[split.negatives[i].head].push_back(neg_scores[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < split.positives.size(); ++i) {
    auto it = by_head.find(split.positives[i].head);
    total += it != by_head.end() ? mrr(pos_scores[i], it->second) : mrr(pos_scores[i], neg_scores);
  }
  return total / static_cast<double>(split.positives.size());
}

double evaluate(model::Model& model, const EvalSplit& split, const MetricSpec& spec) {
  if (split.empty()) throw std::invalid_argument("evaluate: split has no positives or no negatives");
  std::vector<Edge> all = split.positives;
  all.insert(all.end(), split.negatives.begin(), split.negatives.end());
  const std::vector<double> scores = model.score(all);
  const std::span<const double> s(scores);
  return metric_from_scores(split, s.first(split.positives.size()),
                            s.subspan(split.positives.size()), spec);
}

}  // namespace aml::eval
