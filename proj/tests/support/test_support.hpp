#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aml/core/matrix.hpp"
#include "aml/core/random.hpp"
#include "aml/graph/csr_graph.hpp"

namespace aml::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = d(rng);
  return m;
}

// Each ordered pair (i, j), i != j, kept with probability p.
inline graph::CsrGraph random_digraph(graph::NodeId n, double p, Rng& rng,
                                      bool allow_self = false) {
  std::bernoulli_distribution keep(p);
  std::vector<graph::Edge> edges;
  for (graph::NodeId i = 0; i < n; ++i)
    for (graph::NodeId j = 0; j < n; ++j)
      if ((allow_self || i != j) && keep(rng)) edges.push_back({i, j});
  return graph::CsrGraph::from_edges(n, edges);
}

inline graph::CsrGraph random_undirected(graph::NodeId n, double p, Rng& rng) {
  std::bernoulli_distribution keep(p);
  std::vector<graph::Edge> edges;
  for (graph::NodeId i = 0; i < n; ++i)
    for (graph::NodeId j = i + 1; j < n; ++j)
      if (keep(rng)) {
        edges.push_back({i, j});
        edges.push_back({j, i});
      }
  return graph::CsrGraph::from_edges(n, edges);
}

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("aml_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline double max_rel_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    const double denom = std::max({std::abs(x), std::abs(y), 1.0});
    worst = std::max(worst, std::abs(x - y) / denom);
  }
  return worst;
}

}  // namespace aml::testing
