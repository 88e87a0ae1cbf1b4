#pragma once

#include <filesystem>

#include "aml/core/matrix.hpp"
#include "aml/graph/csr_graph.hpp"
#include "aml/graph/edge_set.hpp"

namespace aml::graph {

// Text edge list: one "head<TAB>tail" per line, 0-based ids. Duplicates are
// dropped. Throws ParseError (with the line number) or BoundsError.
CsrGraph load_edge_list(const std::filesystem::path& path, NodeId num_nodes);
void write_edge_list(const std::filesystem::path& path, const CsrGraph& graph);

// Split file: "head<TAB>tail[<TAB>label]". A missing label means positive.
EdgeSet load_split(const std::filesystem::path& path, NodeId num_nodes);
void write_split(const std::filesystem::path& path, const EdgeSet& split);

// Binary feature matrix: uint32 rows, uint32 cols, then rows*cols float64,
// little-endian, row-major.
Matrix load_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const Matrix& features);

}  // namespace aml::graph
