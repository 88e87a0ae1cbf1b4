#include "aml/graph/csr_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aml/core/error.hpp"

namespace aml::graph {

CsrGraph::CsrGraph(NodeId num_nodes, std::vector<std::int64_t> row_offsets,
                   std::vector<NodeId> col_indices, std::vector<double> values)
    : num_nodes_(num_nodes),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (num_nodes_ < 0) throw std::invalid_argument("node count must be non-negative");
  if (row_offsets_.size() != static_cast<std::size_t>(num_nodes_) + 1) {
    throw std::invalid_argument("row_offsets must have num_nodes + 1 entries");
  }
  if (col_indices_.size() != values_.size()) {
    throw std::invalid_argument("col_indices and values differ in length");
  }
  if (row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<std::int64_t>(col_indices_.size())) {
    throw std::invalid_argument("row_offsets must start at 0 and end at nnz");
  }
  for (NodeId i = 0; i < num_nodes_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw std::invalid_argument("row_offsets must be non-decreasing");
    }
    for (auto p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const NodeId c = col_indices_[p];
      if (c < 0 || c >= num_nodes_) {
        throw BoundsError("column index " + std::to_string(c) + " out of range in row " +
                          std::to_string(i));
      }
      if (p > row_offsets_[i] && col_indices_[p - 1] >= c) {
        throw std::invalid_argument("columns not strictly increasing in row " +
                                    std::to_string(i));
      }
    }
  }
}

CsrGraph CsrGraph::from_edges(NodeId num_nodes, std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (const Edge& e : sorted) {
    if (e.head < 0 || e.head >= num_nodes || e.tail < 0 || e.tail >= num_nodes) {
      throw BoundsError("edge (" + std::to_string(e.head) + "," + std::to_string(e.tail) +
                        ") out of range for " + std::to_string(num_nodes) + " nodes");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::int64_t> offsets(static_cast<std::size_t>(num_nodes) + 1, 0);
  std::vector<NodeId> cols;
  cols.reserve(sorted.size());
  for (const Edge& e : sorted) {
    ++offsets[e.head + 1];
    cols.push_back(e.tail);
  }
  for (NodeId i = 0; i < num_nodes; ++i) offsets[i + 1] += offsets[i];
  std::vector<double> vals(cols.size(), 1.0);
  return CsrGraph(num_nodes, std::move(offsets), std::move(cols), std::move(vals));
}

CsrGraph CsrGraph::self_loops(NodeId num_nodes) {
  std::vector<Edge> e;
  e.reserve(num_nodes);
  for (NodeId i = 0; i < num_nodes; ++i) e.push_back({i, i});
  return from_edges(num_nodes, e);
}

bool CsrGraph::has_edge(NodeId head, NodeId tail) const {
  if (head < 0 || head >= num_nodes_) return false;
  const auto nb = neighbors(head);
  return std::binary_search(nb.begin(), nb.end(), tail);
}

std::vector<Edge> CsrGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(col_indices_.size());
  for (NodeId i = 0; i < num_nodes_; ++i)
    for (NodeId j : neighbors(i)) out.push_back({i, j});
  return out;
}

CsrGraph CsrGraph::transpose() const {
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (NodeId c : col_indices_) ++offsets[c + 1];
  for (NodeId i = 0; i < num_nodes_; ++i) offsets[i + 1] += offsets[i];
  std::vector<NodeId> cols(col_indices_.size());
  std::vector<double> vals(values_.size());
  std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
  // Rows visited in increasing order, so each transposed row comes out sorted.
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (auto p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const auto dst = cursor[col_indices_[p]]++;
      cols[dst] = i;
      vals[dst] = values_[p];
    }
  }
  return CsrGraph(num_nodes_, std::move(offsets), std::move(cols), std::move(vals));
}

CsrGraph CsrGraph::with_self_loops() const {
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(num_nodes_) + 1, 0);
  std::vector<NodeId> cols;
  std::vector<double> vals;
  cols.reserve(col_indices_.size() + num_nodes_);
  vals.reserve(col_indices_.size() + num_nodes_);
  for (NodeId i = 0; i < num_nodes_; ++i) {
    bool placed = false;
    for (auto p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (!placed && col_indices_[p] >= i) {
        if (col_indices_[p] != i) {
          cols.push_back(i);
          vals.push_back(1.0);
        }
        placed = true;
      }
      cols.push_back(col_indices_[p]);
      vals.push_back(values_[p]);
    }
    if (!placed) {
      cols.push_back(i);
      vals.push_back(1.0);
    }
    offsets[i + 1] = static_cast<std::int64_t>(cols.size());
  }
  return CsrGraph(num_nodes_, std::move(offsets), std::move(cols), std::move(vals));
}

std::uint64_t CsrGraph::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(&num_nodes_, sizeof(num_nodes_));
  feed(row_offsets_.data(), row_offsets_.size() * sizeof(std::int64_t));
  feed(col_indices_.data(), col_indices_.size() * sizeof(NodeId));
  feed(values_.data(), values_.size() * sizeof(double));
  return h;
}

CsrGraph normalize(const CsrGraph& graph, NormMode mode) {
  const NodeId n = graph.num_nodes();
  std::vector<double> out_deg(n, 0.0), in_deg(n, 0.0);
  const auto& offs = graph.row_offsets();
  const auto& cols = graph.col_indices();
  const auto& vals = graph.values();
  for (NodeId i = 0; i < n; ++i) {
    for (auto p = offs[i]; p < offs[i + 1]; ++p) {
      out_deg[i] += vals[p];
      in_deg[cols[p]] += vals[p];
    }
  }
  std::vector<double> normed(vals.size());
  for (NodeId i = 0; i < n; ++i) {
    for (auto p = offs[i]; p < offs[i + 1]; ++p) {
      const NodeId j = cols[p];
      switch (mode) {
        case NormMode::Row: normed[p] = vals[p] / out_deg[i]; break;
        case NormMode::Column: normed[p] = vals[p] / in_deg[j]; break;
        case NormMode::Symmetric: normed[p] = vals[p] / std::sqrt(out_deg[i] * in_deg[j]); break;
      }
    }
  }
  return CsrGraph(n, offs, cols, std::move(normed));
}

Matrix spmm(const CsrGraph& graph, const Matrix& dense) {
  if (dense.rows() != static_cast<std::size_t>(graph.num_nodes())) {
    throw ShapeError("spmm: dense operand has " + std::to_string(dense.rows()) +
                     " rows, graph has " + std::to_string(graph.num_nodes()) + " nodes");
  }
  const std::size_t r = dense.cols();
  Matrix out(dense.rows(), r);
  const auto& offs = graph.row_offsets();
  const auto& cols = graph.col_indices();
  const auto& vals = graph.values();
  for (NodeId i = 0; i < graph.num_nodes(); ++i) {
    auto orow = out.row(i);
    for (auto p = offs[i]; p < offs[i + 1]; ++p) {
      const double w = vals[p];
      const auto src = dense.row(cols[p]);
      for (std::size_t c = 0; c < r; ++c) orow[c] += w * src[c];
    }
  }
  return out;
}

Matrix to_dense(const CsrGraph& graph) {
  Matrix d(graph.num_nodes(), graph.num_nodes());
  for (NodeId i = 0; i < graph.num_nodes(); ++i) {
    const auto nb = graph.neighbors(i);
    const auto w = graph.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) d(i, nb[k]) = w[k];
  }
  return d;
}

}  // namespace aml::graph
