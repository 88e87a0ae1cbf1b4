#pragma once

#include <filesystem>

#include "aml/graph/synthetic.hpp"

namespace aml::cli {

// On-disk layout of a dataset directory:
//   features.bin  feature matrix (fixes N)
//   graph.tsv     training adjacency, directed edge list
//   train.tsv     training pairs
//   valid.tsv, test.tsv  labelled evaluation pairs (optional)
struct Dataset {
  graph::CsrGraph graph;
  Matrix features;
  graph::EdgeSet train;
  graph::EdgeSet valid;
  graph::EdgeSet test;

  graph::NodeId num_nodes() const { return graph.num_nodes(); }
};

// Throws ConfigError when the directory or a required file is missing.
Dataset load_dataset(const std::filesystem::path& dir);
void write_dataset(const std::filesystem::path& dir, const graph::SyntheticData& data);

}  // namespace aml::cli
