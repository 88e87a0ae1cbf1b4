#pragma once

#include <filesystem>
#include <span>

#include "aml/nn/param.hpp"

namespace aml::nn {

// Binary checkpoint, little-endian:
//   "AMLCKPT1", uint32 count, then per tensor:
//   uint32 name_len, name bytes, uint32 rows, uint32 cols, rows*cols float64.
// Reloading restores every value bit for bit.
void save_checkpoint(const std::filesystem::path& path, std::span<const Param* const> params);

// Matches tensors by name; throws if a tensor is missing or has a different
// shape.
void load_checkpoint(const std::filesystem::path& path, std::span<Param* const> params);

}  // namespace aml::nn
