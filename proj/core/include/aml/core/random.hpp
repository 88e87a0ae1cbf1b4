#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aml {

using Rng = std::mt19937_64;

// Derives an independent generator for a named sub-stream ("init",
// "sampler", "negatives", "data", ...) of a single run seed.
Rng stream_rng(std::uint64_t seed, std::string_view stream);

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace aml
