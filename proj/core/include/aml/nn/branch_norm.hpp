#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "aml/nn/param.hpp"

namespace aml::nn {

enum class Branch { Head, Tail };

std::string_view to_string(Branch b);

// BatchNorm over the columns of a B x r block. Each branch owns its own
// instance; head and tail never share storage.
class BranchNorm {
 public:
  BranchNorm() = default;
  BranchNorm(std::string name, std::size_t width, Branch branch);

  std::size_t width() const { return gamma.value.cols(); }

  Branch branch = Branch::Head;
  Param gamma;         // 1 x r, starts at 1
  Param beta;          // 1 x r, starts at 0
  Param running_mean;  // 1 x r, not trainable
  Param running_var;   // 1 x r, not trainable
  double momentum = 0.1;
  double eps = 1e-8;
};

}  // namespace aml::nn
