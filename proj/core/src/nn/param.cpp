#include "aml/nn/param.hpp"

#include "aml/nn/branch_norm.hpp"

namespace aml::nn {

Param::Param(std::string n, Matrix v, bool train)
    : name(std::move(n)),
      value(std::move(v)),
      grad(value.rows(), value.cols()),
      adam_m(value.rows(), value.cols()),
      adam_v(value.rows(), value.cols()),
      trainable(train) {}

std::string_view to_string(Branch b) { return b == Branch::Head ? "head" : "tail"; }

BranchNorm::BranchNorm(std::string name, std::size_t width, Branch br)
    : branch(br),
      gamma(name + ".gamma", Matrix(1, width, 1.0)),
      beta(name + ".beta", Matrix(1, width, 0.0)),
      running_mean(name + ".running_mean", Matrix(1, width, 0.0), false),
      running_var(name + ".running_var", Matrix(1, width, 1.0), false) {}

}  // namespace aml::nn
