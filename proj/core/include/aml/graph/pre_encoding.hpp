#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <tuple>

#include "aml/core/matrix.hpp"
#include "aml/graph/csr_graph.hpp"

namespace aml::graph {

// Structure-aware MLP inputs: v0 = A^L X (propagated features) and
// delta0 = X - v0 (what propagation removed). v0 + delta0 reproduces X.
struct PreEncoding {
  Matrix v0;
  Matrix delta0;
  int layers = 0;
};

// graph must already be normalized. Runs `layers` successive spmm calls.
PreEncoding pre_encode(const CsrGraph& graph, const Matrix& features, int layers);

struct PreEncodingKey {
  std::uint64_t graph_hash = 0;
  NormMode mode = NormMode::Row;
  int layers = 0;

  friend auto operator<=>(const PreEncodingKey&, const PreEncodingKey&) = default;
};

void save_pre_encoding(const std::filesystem::path& path, const PreEncodingKey& key,
                       const PreEncoding& pre);
// nullopt when the file is missing or was written for a different key.
std::optional<PreEncoding> load_pre_encoding(const std::filesystem::path& path,
                                             const PreEncodingKey& key);

// One-time computation shared by every epoch of a run. Optionally backed by a
// file in cache_dir.
class PreEncodingCache {
 public:
  explicit PreEncodingCache(std::optional<std::filesystem::path> cache_dir = std::nullopt)
      : cache_dir_(std::move(cache_dir)) {}

  // `graph` is the normalized adjacency; `mode` only participates in the key.
  const PreEncoding& get(const CsrGraph& graph, NormMode mode, const Matrix& features,
                         int layers);
  std::size_t computed() const { return computed_; }

 private:
  std::optional<std::filesystem::path> cache_dir_;
  std::map<PreEncodingKey, PreEncoding> entries_;
  std::size_t computed_ = 0;
};

}  // namespace aml::graph
