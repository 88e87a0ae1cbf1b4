#pragma once

#include <cstdint>
#include <string>

#include "aml/core/matrix.hpp"

namespace aml::nn {

// A learnable matrix with its gradient and Adam moments. Non-trainable
// tensors (running statistics) reuse the type so checkpoints see them too.
struct Param {
  Param() = default;
  Param(std::string name, Matrix value, bool trainable = true);

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
  std::int64_t step_count = 0;
  bool trainable = true;
};

}  // namespace aml::nn
