#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aml/core/random.hpp"
#include "aml/graph/edge_set.hpp"

namespace aml::sampling {

using graph::Edge;
using graph::EdgeSet;
using graph::NodeId;

enum class Strategy { RowWise, EdgeWise };

// Positives first, then the negatives drawn for them.
struct MiniBatch {
  std::vector<Edge> pairs;
  std::vector<std::uint8_t> labels;
  std::vector<NodeId> distinct_heads;  // sorted
  std::vector<NodeId> distinct_tails;  // sorted
  std::size_t num_positives = 0;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

struct SamplerConfig {
  Strategy strategy = Strategy::RowWise;
  std::int64_t batch_size = 1024;  // B, target number of positive pairs per batch
  std::uint64_t seed = 0;
  int negatives_per_positive = 1;  // k
  // Groups row-wise batches by tail and corrupts heads instead of tails.
  bool group_by_tail = false;

  void validate() const;
};

// B~ = max(1, round(B * N / |E|)): heads per row-wise batch.
std::int64_t heads_per_batch(std::int64_t batch_size, std::int64_t num_nodes,
                             std::int64_t num_edges);

// Positives only. A seeded permutation of the nodes is cut into consecutive
// head blocks of size B~; a batch holds every pair of its heads. Blocks whose
// heads have no pairs are dropped.
std::vector<MiniBatch> rowwise_epoch(const EdgeSet& edges, std::int64_t batch_size, Rng& rng);
std::vector<MiniBatch> rowwise_epoch(const EdgeSet& edges, std::int64_t batch_size,
                                     std::uint64_t seed);

// Positives only. A seeded permutation of the pairs cut into batches of B.
std::vector<MiniBatch> edgewise_epoch(const EdgeSet& edges, std::int64_t batch_size, Rng& rng);
std::vector<MiniBatch> edgewise_epoch(const EdgeSet& edges, std::int64_t batch_size,
                                      std::uint64_t seed);

struct NegativeResult {
  std::vector<Edge> pairs;
  std::int64_t skipped = 0;  // draws abandoned after the retry cap
};

// k corrupted pairs per positive (tail replaced, or head when corrupt_head),
// redrawn while the candidate is in `exclusion`, at most 100 tries.
NegativeResult negative_sample(std::span<const Edge> positives, NodeId num_nodes, int k,
                               Rng& rng, const EdgeSet& exclusion, bool corrupt_head = false);
NegativeResult negative_sample(std::span<const Edge> positives, NodeId num_nodes, int k,
                               std::uint64_t seed, const EdgeSet& exclusion,
                               bool corrupt_head = false);

// Appends negatives to a batch and refreshes its distinct node lists.
void attach_negatives(MiniBatch& batch, std::span<const Edge> negatives);

// Epoch iterator for one training context. Uses the "sampler" and
// "negatives" sub-streams of the seed, advancing them across epochs.
class Sampler {
 public:
  Sampler(SamplerConfig config, EdgeSet train, EdgeSet exclusion);

  std::vector<MiniBatch> next_epoch();
  const SamplerConfig& config() const { return config_; }
  std::int64_t skipped_negatives() const { return skipped_; }

 private:
  SamplerConfig config_;
  EdgeSet train_;
  EdgeSet grouped_;  // train, reversed when grouping by tail
  EdgeSet exclusion_;
  Rng batch_rng_;
  Rng negative_rng_;
  std::int64_t skipped_ = 0;
};

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy s);

}  // namespace aml::sampling
