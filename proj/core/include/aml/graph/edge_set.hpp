#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aml/graph/csr_graph.hpp"

namespace aml::graph {

// Labelled (head, tail) pairs with a row index over heads.
//
// Pairs are kept in (head, tail) order so the row index is a plain CSR over
// the pair array: pairs_of(i) returns the contiguous block of pairs whose head
// is i. Positive pairs are distinct.
class EdgeSet {
 public:
  EdgeSet() = default;
  // labels empty means "all positive".
  EdgeSet(NodeId num_nodes, std::vector<Edge> pairs, std::vector<std::uint8_t> labels = {});

  static EdgeSet from_graph(const CsrGraph& graph);

  NodeId num_nodes() const { return num_nodes_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  const std::vector<Edge>& pairs() const { return pairs_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  std::span<const Edge> pairs_of(NodeId head) const {
    return {pairs_.data() + row_offsets_[head],
            static_cast<std::size_t>(row_offsets_[head + 1] - row_offsets_[head])};
  }
  std::span<const std::uint8_t> labels_of(NodeId head) const {
    return {labels_.data() + row_offsets_[head],
            static_cast<std::size_t>(row_offsets_[head + 1] - row_offsets_[head])};
  }
  std::size_t num_positives() const;
  // Number of distinct heads with at least one pair.
  std::size_t num_heads() const;
  bool contains(NodeId head, NodeId tail) const;

  // Swaps head and tail of every pair.
  EdgeSet reversed() const;
  EdgeSet positives_only() const;

 private:
  NodeId num_nodes_ = 0;
  std::vector<Edge> pairs_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::int64_t> row_offsets_{0};
};

// Adds the reverse of every pair and removes duplicates. Input must be
// all-positive.
EdgeSet symmetrize(const EdgeSet& edges);

}  // namespace aml::graph
