#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aml/model/config.hpp"
#include "aml/nn/branch_norm.hpp"
#include "aml/nn/param.hpp"

namespace aml::model {

struct LayerParams {
  nn::Param w1;  // neighbour term
  nn::Param w2;  // self term
  std::optional<nn::Param> tail_w1;  // present when knowledge transfer is off
  std::optional<nn::Param> tail_w2;
  std::optional<nn::Param> delta;    // residual path weight
  // Norms belong to paths: head_norm to message passing (U), tail_norm to the
  // MLP path (V~), whichever side of the link each path serves.
  std::optional<nn::BranchNorm> head_norm;
  std::optional<nn::BranchNorm> tail_norm;
};

// Every tensor the model owns. Tensors are allocated only when the resolved
// plan reads them. Each tensor draws its initial values from its own named
// stream, so the values of shared tensors do not depend on the toggles.
class ModelParams {
 public:
  ModelParams() = default;
  ModelParams(const ModelConfig& config, std::uint64_t seed);

  std::vector<LayerParams> layers;
  nn::Param theta1;  // r x r
  nn::Param bias1;   // 1 x r
  nn::Param theta2;  // r x 1
  nn::Param bias2;   // 1 x 1
  bool mlp_predictor = true;

  // Trainable tensors, in a fixed order.
  std::vector<nn::Param*> trainable();
  // Every tensor including running statistics, for checkpoints.
  std::vector<nn::Param*> tensors();
  std::vector<const nn::Param*> tensors() const;
};

}  // namespace aml::model
