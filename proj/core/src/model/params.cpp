#include "aml/model/params.hpp"

#include <cmath>
#include <random>
#include <string>

#include "aml/core/error.hpp"
#include "aml/core/random.hpp"

namespace aml::model {

namespace {

Matrix uniform_init(std::size_t rows, std::size_t cols, std::uint64_t seed,
                    const std::string& name) {
  Rng rng = stream_rng(seed, "init." + name);
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

nn::Param make(const std::string& name, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return nn::Param(name, uniform_init(rows, cols, seed, name));
}

}  // namespace

ModelParams::ModelParams(const ModelConfig& config, std::uint64_t seed) {
  const ForwardPlan plan = variant_wire(config);
  if (config.input_dim < 1) throw ConfigError("input dimension must be >= 1");
  const bool has_mlp = plan.head == Path::Mlp || plan.tail == Path::Mlp;
  const bool has_gnn = plan.gnn_stages() > 0;
  const auto r = static_cast<std::size_t>(config.hidden);
  for (int l = 1; l <= config.layers; ++l) {
    const std::size_t in = l == 1 ? static_cast<std::size_t>(config.input_dim) : r;
    const std::string tag = "layer" + std::to_string(l);
    LayerParams lp;
    lp.w1 = make(tag + ".w1", in, r, seed);
    lp.w2 = make(tag + ".w2", in, r, seed);
    if (has_mlp && !plan.effective.knowledge_transfer) {
      // Independent storage, same starting point as the shared weights.
      lp.tail_w1 = nn::Param(tag + ".tail_w1", lp.w1.value);
      lp.tail_w2 = nn::Param(tag + ".tail_w2", lp.w2.value);
    }
    if (has_mlp && plan.effective.residual_delta) lp.delta = make(tag + ".delta", in, r, seed);
    if (config.batch_norm && l < config.layers) {
      if (has_gnn) lp.head_norm = nn::BranchNorm(tag + ".norm_head", r, nn::Branch::Head);
      if (has_mlp) lp.tail_norm = nn::BranchNorm(tag + ".norm_tail", r, nn::Branch::Tail);
    }
    layers.push_back(std::move(lp));
  }
  mlp_predictor = config.predictor == PredictorKind::Mlp;
  theta1 = make("predictor.theta1", r, r, seed);
  bias1 = nn::Param("predictor.bias1", Matrix(1, r, 0.0));
  theta2 = make("predictor.theta2", r, 1, seed);
  bias2 = nn::Param("predictor.bias2", Matrix(1, 1, 0.0));
}

std::vector<nn::Param*> ModelParams::trainable() {
  std::vector<nn::Param*> out;
  for (LayerParams& lp : layers) {
    out.push_back(&lp.w1);
    out.push_back(&lp.w2);
    if (lp.tail_w1) out.push_back(&*lp.tail_w1);
    if (lp.tail_w2) out.push_back(&*lp.tail_w2);
    if (lp.delta) out.push_back(&*lp.delta);
    for (auto* bn : {&lp.head_norm, &lp.tail_norm}) {
      if (*bn) {
        out.push_back(&(*bn)->gamma);
        out.push_back(&(*bn)->beta);
      }
    }
  }
  if (mlp_predictor) {
    out.push_back(&theta1);
    out.push_back(&bias1);
    out.push_back(&theta2);
    out.push_back(&bias2);
  }
  return out;
}

std::vector<nn::Param*> ModelParams::tensors() {
  std::vector<nn::Param*> out = trainable();
  for (LayerParams& lp : layers) {
    for (auto* bn : {&lp.head_norm, &lp.tail_norm}) {
      if (*bn) {
        out.push_back(&(*bn)->running_mean);
        out.push_back(&(*bn)->running_var);
      }
    }
  }
  return out;
}

std::vector<const nn::Param*> ModelParams::tensors() const {
  auto* self = const_cast<ModelParams*>(this);
  std::vector<nn::Param*> all = self->tensors();
  return {all.begin(), all.end()};
}

}  // namespace aml::model
