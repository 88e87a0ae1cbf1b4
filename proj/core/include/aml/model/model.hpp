#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aml/model/config.hpp"
#include "aml/model/forward.hpp"
#include "aml/model/params.hpp"

namespace aml::model {

// A configured variant bound to its graph context and parameters.
class Model {
 public:
  Model(ModelConfig config, const graph::CsrGraph& train_graph, Matrix features,
        std::uint64_t seed, graph::PreEncodingCache* cache = nullptr);
  Model(ModelConfig config, GraphContext context, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const ForwardPlan& plan() const { return plan_; }
  const GraphContext& context() const { return ctx_; }
  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }

  // Logits (pairs x 1) for pairs in their original orientation.
  nn::Var forward(nn::Tape& tape, std::span<const Edge> pairs, const ForwardOptions& options);

  // Inference: running norm statistics, full neighbourhoods, no gradients.
  std::vector<double> score(std::span<const Edge> pairs);

 private:
  ModelConfig config_;
  ForwardPlan plan_;
  GraphContext ctx_;
  ModelParams params_;
};

}  // namespace aml::model
