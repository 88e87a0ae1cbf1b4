#include "aml/nn/checkpoint.hpp"

#include <fstream>
#include <map>

#include "aml/core/binary_io.hpp"
#include "aml/core/error.hpp"

namespace aml::nn {

namespace {
constexpr char kMagic[8] = {'A', 'M', 'L', 'C', 'K', 'P', 'T', '1'};
}

void save_checkpoint(const std::filesystem::path& path, std::span<const Param* const> params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    binio::write_string(out, p->name);
    binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.rows()));
    binio::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.cols()));
    binio::write_doubles(out, p->value.data());
  }
  if (!out) throw std::runtime_error("short write on checkpoint " + path.string());
}

void load_checkpoint(const std::filesystem::path& path, std::span<Param* const> params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw ParseError("not a checkpoint file: " + path.string(), 0);
  }
  std::map<std::string, Matrix> stored;
  const auto count = binio::read_pod<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name = binio::read_string(in);
    const auto rows = binio::read_pod<std::uint32_t>(in);
    const auto cols = binio::read_pod<std::uint32_t>(in);
    Matrix m(rows, cols);
    binio::read_doubles(in, m.data());
    stored.emplace(std::move(name), std::move(m));
  }
  for (Param* p : params) {
    auto it = stored.find(p->name);
    if (it == stored.end()) throw ConfigError("checkpoint has no tensor '" + p->name + "'");
    if (!it->second.same_shape(p->value)) {
      throw ShapeError("checkpoint tensor '" + p->name + "' has a different shape");
    }
    p->value = it->second;
  }
}

}  // namespace aml::nn
