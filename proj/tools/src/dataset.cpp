#include "aml/cli/dataset.hpp"

#include "aml/core/error.hpp"
#include "aml/graph/io.hpp"

namespace aml::cli {

namespace fs = std::filesystem;

Dataset load_dataset(const fs::path& dir) {
  if (dir.empty()) throw ConfigError("no dataset given (set data=DIR or --data DIR)");
  if (!fs::is_directory(dir)) throw ConfigError("dataset directory not found: " + dir.string());
  for (const char* f : {"features.bin", "graph.tsv", "train.tsv"}) {
    if (!fs::exists(dir / f)) throw ConfigError("dataset is missing " + (dir / f).string());
  }
  Dataset d;
  d.features = graph::load_features(dir / "features.bin");
  const auto n = static_cast<graph::NodeId>(d.features.rows());
  d.graph = graph::load_edge_list(dir / "graph.tsv", n);
  d.train = graph::load_split(dir / "train.tsv", n);
  if (fs::exists(dir / "valid.tsv")) d.valid = graph::load_split(dir / "valid.tsv", n);
  else d.valid = graph::EdgeSet(n, {});
  if (fs::exists(dir / "test.tsv")) d.test = graph::load_split(dir / "test.tsv", n);
  else d.test = graph::EdgeSet(n, {});
  return d;
}

void write_dataset(const fs::path& dir, const graph::SyntheticData& data) {
  fs::create_directories(dir);
  graph::write_features(dir / "features.bin", data.features);
  graph::write_edge_list(dir / "graph.tsv", data.graph);
  graph::write_split(dir / "train.tsv", data.train);
  graph::write_split(dir / "valid.tsv", data.valid);
  graph::write_split(dir / "test.tsv", data.test);
}

}  // namespace aml::cli
