#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aml/core/matrix.hpp"

namespace aml::graph {

using NodeId = std::int32_t;

struct Edge {
  NodeId head = 0;
  NodeId tail = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Compressed sparse row adjacency. Canonical form: columns strictly
// increasing inside every row. Immutable after construction.
class CsrGraph {
 public:
  CsrGraph() = default;
  // Validates every invariant; throws on violation.
  CsrGraph(NodeId num_nodes, std::vector<std::int64_t> row_offsets,
           std::vector<NodeId> col_indices, std::vector<double> values);

  // Sorts and deduplicates; all weights 1.0.
  static CsrGraph from_edges(NodeId num_nodes, std::span<const Edge> edges);
  // Graph whose only edges are self-loops of weight 1.
  static CsrGraph self_loops(NodeId num_nodes);

  NodeId num_nodes() const { return num_nodes_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_indices_.size()); }

  const std::vector<std::int64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<NodeId>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  std::int64_t degree(NodeId node) const {
    return row_offsets_[node + 1] - row_offsets_[node];
  }
  std::span<const NodeId> neighbors(NodeId node) const {
    return {col_indices_.data() + row_offsets_[node], static_cast<std::size_t>(degree(node))};
  }
  std::span<const double> weights(NodeId node) const {
    return {values_.data() + row_offsets_[node], static_cast<std::size_t>(degree(node))};
  }
  bool has_edge(NodeId head, NodeId tail) const;

  std::vector<Edge> edges() const;
  CsrGraph transpose() const;
  // Adds any missing self-loop with weight 1.
  CsrGraph with_self_loops() const;
  // FNV-1a over structure and weights; used as a cache key.
  std::uint64_t hash() const;

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  NodeId num_nodes_ = 0;
  std::vector<std::int64_t> row_offsets_{0};
  std::vector<NodeId> col_indices_;
  std::vector<double> values_;
};

enum class NormMode { Row, Column, Symmetric };

// Row: nonempty rows sum to 1. Column: nonempty columns sum to 1.
// Symmetric: A_ij / sqrt(deg_out(i) * deg_in(j)). Empty rows stay empty.
CsrGraph normalize(const CsrGraph& graph, NormMode mode);

// graph * dense. Row count of dense must equal num_nodes.
Matrix spmm(const CsrGraph& graph, const Matrix& dense);

// Dense N x N copy, for small-graph oracles.
Matrix to_dense(const CsrGraph& graph);

}  // namespace aml::graph
