#include "aml/sampling/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aml/core/error.hpp"

namespace aml::sampling {

namespace {

constexpr int kMaxTries = 100;

void finish(MiniBatch& b) {
  b.distinct_heads.clear();
  b.distinct_tails.clear();
  for (const Edge& e : b.pairs) {
    b.distinct_heads.push_back(e.head);
    b.distinct_tails.push_back(e.tail);
  }
  for (auto* v : {&b.distinct_heads, &b.distinct_tails}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
}

void check_batch_size(std::int64_t b) {
  if (b < 1) throw ConfigError("batch size must be >= 1, got " + std::to_string(b));
}

}  // namespace

void SamplerConfig::validate() const {
  check_batch_size(batch_size);
  if (negatives_per_positive < 0) throw ConfigError("neg_k must be >= 0");
}

std::int64_t heads_per_batch(std::int64_t batch_size, std::int64_t num_nodes,
                             std::int64_t num_edges) {
  check_batch_size(batch_size);
  if (num_edges <= 0) return std::max<std::int64_t>(1, num_nodes);
  const double b = std::round(static_cast<double>(batch_size) * static_cast<double>(num_nodes) /
                              static_cast<double>(num_edges));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(b));
}

std::vector<MiniBatch> rowwise_epoch(const EdgeSet& edges, std::int64_t batch_size, Rng& rng) {
  const NodeId n = edges.num_nodes();
  const std::int64_t block =
      heads_per_batch(batch_size, n, static_cast<std::int64_t>(edges.size()));
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<MiniBatch> out;
  for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(block)) {
    const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(block));
    MiniBatch b;
    for (std::size_t k = start; k < stop; ++k) {
      const auto block_pairs = edges.pairs_of(order[k]);
      b.pairs.insert(b.pairs.end(), block_pairs.begin(), block_pairs.end());
    }
    if (b.pairs.empty()) continue;
    b.labels.assign(b.pairs.size(), 1);
    b.num_positives = b.pairs.size();
    finish(b);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<MiniBatch> rowwise_epoch(const EdgeSet& edges, std::int64_t batch_size,
                                     std::uint64_t seed) {
  Rng rng = stream_rng(seed, "sampler");
  return rowwise_epoch(edges, batch_size, rng);
}

std::vector<MiniBatch> edgewise_epoch(const EdgeSet& edges, std::int64_t batch_size, Rng& rng) {
  check_batch_size(batch_size);
  const auto& all = edges.pairs();
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<MiniBatch> out;
  const auto b_size = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < order.size(); start += b_size) {
    const std::size_t stop = std::min(order.size(), start + b_size);
    MiniBatch b;
    b.pairs.reserve(stop - start);
    for (std::size_t k = start; k < stop; ++k) b.pairs.push_back(all[order[k]]);
    b.labels.assign(b.pairs.size(), 1);
    b.num_positives = b.pairs.size();
    finish(b);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<MiniBatch> edgewise_epoch(const EdgeSet& edges, std::int64_t batch_size,
                                      std::uint64_t seed) {
  Rng rng = stream_rng(seed, "sampler");
  return edgewise_epoch(edges, batch_size, rng);
}

NegativeResult negative_sample(std::span<const Edge> positives, NodeId num_nodes, int k,
                               Rng& rng, const EdgeSet& exclusion, bool corrupt_head) {
  if (k < 0) throw ConfigError("negatives per positive must be >= 0");
  NegativeResult res;
  if (k == 0 || num_nodes <= 0) return res;
  res.pairs.reserve(positives.size() * static_cast<std::size_t>(k));
  std::uniform_int_distribution<NodeId> pick(0, num_nodes - 1);
  for (const Edge& p : positives) {
    for (int s = 0; s < k; ++s) {
      bool found = false;
      for (int tries = 0; tries < kMaxTries; ++tries) {
        const NodeId c = pick(rng);
        const Edge cand = corrupt_head ? Edge{c, p.tail} : Edge{p.head, c};
        if (!exclusion.contains(cand.head, cand.tail)) {
          res.pairs.push_back(cand);
          found = true;
          break;
        }
      }
      if (!found) ++res.skipped;
    }
  }
  return res;
}

NegativeResult negative_sample(std::span<const Edge> positives, NodeId num_nodes, int k,
                               std::uint64_t seed, const EdgeSet& exclusion, bool corrupt_head) {
  Rng rng = stream_rng(seed, "negatives");
  return negative_sample(positives, num_nodes, k, rng, exclusion, corrupt_head);
}

void attach_negatives(MiniBatch& batch, std::span<const Edge> negatives) {
  batch.pairs.insert(batch.pairs.end(), negatives.begin(), negatives.end());
  batch.labels.resize(batch.pairs.size(), 0);
  finish(batch);
}

Sampler::Sampler(SamplerConfig config, EdgeSet train, EdgeSet exclusion)
    : config_(config),
      train_(std::move(train)),
      exclusion_(std::move(exclusion)),
      batch_rng_(stream_rng(config.seed, "sampler")),
      negative_rng_(stream_rng(config.seed, "negatives")) {
  config_.validate();
  grouped_ = config_.group_by_tail ? train_.reversed() : train_;
}

std::vector<MiniBatch> Sampler::next_epoch() {
  std::vector<MiniBatch> batches;
  if (config_.strategy == Strategy::RowWise) {
    batches = rowwise_epoch(grouped_, config_.batch_size, batch_rng_);
    if (config_.group_by_tail) {
      for (MiniBatch& b : batches) {
        for (Edge& e : b.pairs) std::swap(e.head, e.tail);
        finish(b);
      }
    }
  } else {
    batches = edgewise_epoch(train_, config_.batch_size, batch_rng_);
  }
  for (MiniBatch& b : batches) {
    NegativeResult neg = negative_sample(
        std::span<const Edge>(b.pairs.data(), b.num_positives), train_.num_nodes(),
        config_.negatives_per_positive, negative_rng_, exclusion_, config_.group_by_tail);
    skipped_ += neg.skipped;
    attach_negatives(b, neg.pairs);
  }
  return batches;
}

Strategy parse_strategy(std::string_view name) {
  if (name == "rowwise") return Strategy::RowWise;
  if (name == "edgewise") return Strategy::EdgeWise;
  throw ConfigError("unknown strategy '" + std::string(name) + "' (expected rowwise|edgewise)");
}

std::string_view to_string(Strategy s) {
  return s == Strategy::RowWise ? "rowwise" : "edgewise";
}

}  // namespace aml::sampling
