#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aml/cost/cost_meter.hpp"
#include "aml/eval/metrics.hpp"
#include "aml/model/model.hpp"
#include "aml/sampling/sampler.hpp"

namespace aml::train {

// Mean of log(1 + e^s) - y s, evaluated stably. nullopt for an empty batch.
std::optional<double> batch_loss(std::span<const double> scores, std::span<const double> labels);

struct TrainConfig {
  int epochs = 100;  // T
  double lr = 1e-3;
  double lambda = 0.0;
  sampling::SamplerConfig sampler;
  model::ModelConfig model;
  int eval_every = 1;
  int patience = 20;  // evaluations without improvement; 0 disables early stopping
  std::uint64_t seed = 0;
  eval::MetricSpec metric;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  std::optional<double> loss;  // mean batch loss; absent when no batch ran
  double seconds = 0.0;        // cumulative batch-loop time
  std::optional<double> val_metric;
  double penalty = 0.0;        // (lambda / 2) * sum ||W||^2 after the epoch
  std::int64_t updates = 0;
  cost::CostCounters counters;
};

struct TrainLog {
  std::vector<EpochRecord> records;

  // Header: epoch,loss,seconds,val_metric,gnn_nodes,mlp_nodes
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

// Thrown when a batch produces a non-finite loss or gradient. The model keeps
// the parameters from before that batch.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, int epoch) : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// One training context: model, sampler, optimizer state and counters.
class Trainer {
 public:
  Trainer(TrainConfig config, model::Model& model, graph::EdgeSet train);

  EpochRecord train_epoch();

  const TrainConfig& config() const { return config_; }
  model::Model& model() { return model_; }
  const sampling::Sampler& sampler() const { return sampler_; }
  int epochs_run() const { return epoch_; }

 private:
  TrainConfig config_;
  model::Model& model_;
  sampling::Sampler sampler_;
  Rng fanout_rng_;
  cost::CostMeter meter_;
  int epoch_ = 0;
  double seconds_ = 0.0;
};

struct FitResult {
  TrainLog log;
  int best_epoch = 0;
  std::optional<double> best_metric;
  std::int64_t skipped_negatives = 0;  // draws the sampler gave up on
};

// Runs up to T epochs, evaluating on `valid` every eval_every epochs, and
// leaves the best-validation parameters in the model.
FitResult fit(const TrainConfig& config, model::Model& model, const graph::EdgeSet& train,
              const eval::EvalSplit* valid);

// Copies every tensor value (and optimizer state) of src into dst.
void assign_params(model::ModelParams& dst, const model::ModelParams& src);

}  // namespace aml::train
