#include "aml/graph/io.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "aml/core/binary_io.hpp"
#include "aml/core/error.hpp"

namespace aml::graph {

namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream create(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Splits on tabs/spaces and parses every field as a non-negative integer.
std::vector<long long> parse_fields(std::string_view line, std::size_t line_no) {
  std::vector<long long> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == '\t' || line[pos] == ' ')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != '\t' && line[end] != ' ') ++end;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
    if (ec != std::errc{} || ptr != line.data() + end) {
      throw ParseError("not an integer: '" + std::string(line.substr(pos, end - pos)) + "'",
                       line_no);
    }
    fields.push_back(v);
    pos = end;
  }
  return fields;
}

NodeId checked_id(long long v, NodeId num_nodes, std::size_t line_no) {
  if (v < 0 || v >= num_nodes) {
    throw BoundsError("line " + std::to_string(line_no) + ": node id " + std::to_string(v) +
                      " outside [0, " + std::to_string(num_nodes) + ")");
  }
  return static_cast<NodeId>(v);
}

template <typename OnRow>
void for_each_row(const std::filesystem::path& path, OnRow on_row) {
  auto in = open_text(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    on_row(parse_fields(line, line_no), line_no);
  }
}

}  // namespace

CsrGraph load_edge_list(const std::filesystem::path& path, NodeId num_nodes) {
  std::vector<Edge> edges;
  for_each_row(path, [&](const std::vector<long long>& f, std::size_t line_no) {
    if (f.size() != 2) throw ParseError("expected 'head<TAB>tail'", line_no);
    edges.push_back({checked_id(f[0], num_nodes, line_no), checked_id(f[1], num_nodes, line_no)});
  });
  return CsrGraph::from_edges(num_nodes, edges);
}

void write_edge_list(const std::filesystem::path& path, const CsrGraph& graph) {
  auto out = create(path);
  for (NodeId i = 0; i < graph.num_nodes(); ++i)
    for (NodeId j : graph.neighbors(i)) out << i << '\t' << j << '\n';
}

EdgeSet load_split(const std::filesystem::path& path, NodeId num_nodes) {
  std::vector<Edge> pairs;
  std::vector<std::uint8_t> labels;
  for_each_row(path, [&](const std::vector<long long>& f, std::size_t line_no) {
    if (f.size() != 2 && f.size() != 3) {
      throw ParseError("expected 'head<TAB>tail[<TAB>label]'", line_no);
    }
    pairs.push_back({checked_id(f[0], num_nodes, line_no), checked_id(f[1], num_nodes, line_no)});
    const long long label = f.size() == 3 ? f[2] : 1;
    if (label != 0 && label != 1) throw ParseError("label must be 0 or 1", line_no);
    labels.push_back(static_cast<std::uint8_t>(label));
  });
  return EdgeSet(num_nodes, std::move(pairs), std::move(labels));
}

void write_split(const std::filesystem::path& path, const EdgeSet& split) {
  auto out = create(path);
  for (std::size_t k = 0; k < split.size(); ++k) {
    const Edge& e = split.pairs()[k];
    out << e.head << '\t' << e.tail << '\t' << static_cast<int>(split.labels()[k]) << '\n';
  }
}

Matrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto rows = binio::read_pod<std::uint32_t>(in);
  const auto cols = binio::read_pod<std::uint32_t>(in);
  Matrix m(rows, cols);
  binio::read_doubles(in, m.data());
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("trailing bytes after feature matrix in " + path.string(), 0);
  }
  if (!m.all_finite()) throw NumericError("non-finite entry in " + path.string());
  return m;
}

void write_features(const std::filesystem::path& path, const Matrix& features) {
  auto out = create(path, std::ios::binary);
  binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(features.rows()));
  binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(features.cols()));
  binio::write_doubles(out, features.data());
}

}  // namespace aml::graph
