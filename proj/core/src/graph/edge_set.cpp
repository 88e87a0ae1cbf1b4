#include "aml/graph/edge_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "aml/core/error.hpp"

namespace aml::graph {

EdgeSet::EdgeSet(NodeId num_nodes, std::vector<Edge> pairs, std::vector<std::uint8_t> labels)
    : num_nodes_(num_nodes) {
  if (labels.empty()) labels.assign(pairs.size(), 1);
  if (labels.size() != pairs.size()) {
    throw std::invalid_argument("EdgeSet: labels and pairs differ in length");
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Edge& e = pairs[k];
    if (e.head < 0 || e.head >= num_nodes || e.tail < 0 || e.tail >= num_nodes) {
      throw BoundsError("EdgeSet: pair (" + std::to_string(e.head) + "," +
                        std::to_string(e.tail) + ") out of range");
    }
    if (labels[k] > 1) throw std::invalid_argument("EdgeSet: labels must be 0 or 1");
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a] < pairs[b];
  });
  pairs_.reserve(pairs.size());
  labels_.reserve(pairs.size());
  for (std::size_t k : order) {
    pairs_.push_back(pairs[k]);
    labels_.push_back(labels[k]);
  }
  for (std::size_t k = 1; k < pairs_.size(); ++k) {
    if (pairs_[k] == pairs_[k - 1] && labels_[k] == 1 && labels_[k - 1] == 1) {
      throw std::invalid_argument("EdgeSet: duplicate positive pair (" +
                                  std::to_string(pairs_[k].head) + "," +
                                  std::to_string(pairs_[k].tail) + ")");
    }
  }

  row_offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const Edge& e : pairs_) ++row_offsets_[e.head + 1];
  for (NodeId i = 0; i < num_nodes; ++i) row_offsets_[i + 1] += row_offsets_[i];
}

EdgeSet EdgeSet::from_graph(const CsrGraph& graph) {
  return EdgeSet(graph.num_nodes(), graph.edges());
}

std::size_t EdgeSet::num_positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

std::size_t EdgeSet::num_heads() const {
  std::size_t n = 0;
  for (NodeId i = 0; i < num_nodes_; ++i) n += row_offsets_[i + 1] > row_offsets_[i] ? 1 : 0;
  return n;
}

bool EdgeSet::contains(NodeId head, NodeId tail) const {
  if (head < 0 || head >= num_nodes_) return false;
  const auto block = pairs_of(head);
  return std::binary_search(block.begin(), block.end(), Edge{head, tail});
}

EdgeSet EdgeSet::reversed() const {
  std::vector<Edge> swapped;
  swapped.reserve(pairs_.size());
  for (const Edge& e : pairs_) swapped.push_back({e.tail, e.head});
  return EdgeSet(num_nodes_, std::move(swapped), labels_);
}

EdgeSet EdgeSet::positives_only() const {
  std::vector<Edge> keep;
  for (std::size_t k = 0; k < pairs_.size(); ++k)
    if (labels_[k] == 1) keep.push_back(pairs_[k]);
  return EdgeSet(num_nodes_, std::move(keep));
}

EdgeSet symmetrize(const EdgeSet& edges) {
  std::vector<Edge> both;
  both.reserve(2 * edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges.labels()[k] != 1) {
      throw std::invalid_argument("symmetrize: input must contain positives only");
    }
    const Edge& e = edges.pairs()[k];
    both.push_back(e);
    both.push_back({e.tail, e.head});
  }
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());
  return EdgeSet(edges.num_nodes(), std::move(both));
}

}  // namespace aml::graph
