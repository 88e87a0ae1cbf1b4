#include "aml/graph/pre_encoding.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "aml/core/binary_io.hpp"
#include "aml/core/error.hpp"

namespace aml::graph {

namespace {

constexpr char kMagic[8] = {'A', 'M', 'L', 'P', 'R', 'E', '0', '1'};

void write_matrix(std::ostream& out, const Matrix& m) {
  binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  binio::write_doubles(out, m.data());
}

Matrix read_matrix(std::istream& in) {
  const auto rows = binio::read_pod<std::uint32_t>(in);
  const auto cols = binio::read_pod<std::uint32_t>(in);
  Matrix m(rows, cols);
  binio::read_doubles(in, m.data());
  return m;
}

}  // namespace

PreEncoding pre_encode(const CsrGraph& graph, const Matrix& features, int layers) {
  if (layers < 1) throw ConfigError("pre_encode: layer count must be >= 1");
  PreEncoding pre;
  pre.layers = layers;
  pre.v0 = features;
  for (int l = 0; l < layers; ++l) pre.v0 = spmm(graph, pre.v0);
  pre.delta0 = features - pre.v0;
  return pre;
}

void save_pre_encoding(const std::filesystem::path& path, const PreEncodingKey& key,
                       const PreEncoding& pre) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  binio::write_pod<std::uint64_t>(out, key.graph_hash);
  binio::write_pod<std::int32_t>(out, static_cast<std::int32_t>(key.mode));
  binio::write_pod<std::int32_t>(out, key.layers);
  write_matrix(out, pre.v0);
  write_matrix(out, pre.delta0);
}

std::optional<PreEncoding> load_pre_encoding(const std::filesystem::path& path,
                                             const PreEncodingKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + sizeof(magic), kMagic)) return std::nullopt;
  PreEncodingKey stored;
  stored.graph_hash = binio::read_pod<std::uint64_t>(in);
  stored.mode = static_cast<NormMode>(binio::read_pod<std::int32_t>(in));
  stored.layers = binio::read_pod<std::int32_t>(in);
  if (stored != key) return std::nullopt;
  PreEncoding pre;
  pre.layers = key.layers;
  pre.v0 = read_matrix(in);
  pre.delta0 = read_matrix(in);
  return pre;
}

const PreEncoding& PreEncodingCache::get(const CsrGraph& graph, NormMode mode,
                                         const Matrix& features, int layers) {
  // The key covers the feature bytes as well as the graph.
  std::uint64_t h = graph.hash();
  for (double x : features.data()) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    h = (h ^ bits) * 0x100000001b3ULL;
  }
  const PreEncodingKey key{h, mode, layers};
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;

  std::optional<std::filesystem::path> file;
  if (cache_dir_) {
    std::ostringstream name;
    name << "pre_" << std::hex << key.graph_hash << "_" << static_cast<int>(mode) << "_"
         << std::dec << layers << ".bin";
    file = *cache_dir_ / name.str();
    if (auto loaded = load_pre_encoding(*file, key)) {
      return entries_.emplace(key, std::move(*loaded)).first->second;
    }
  }
  PreEncoding pre = pre_encode(graph, features, layers);
  ++computed_;
  if (file) save_pre_encoding(*file, key, pre);
  return entries_.emplace(key, std::move(pre)).first->second;
}

}  // namespace aml::graph
