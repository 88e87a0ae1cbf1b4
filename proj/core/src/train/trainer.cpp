#include "aml/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "aml/core/error.hpp"
#include "aml/nn/optim.hpp"

namespace aml::train {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

TrainConfig bound_to(TrainConfig c, const model::Model& m) {
  c.model = m.config();
  c.validate();
  return c;
}

sampling::SamplerConfig sampler_for(const TrainConfig& c) {
  sampling::SamplerConfig s = c.sampler;
  s.seed = c.seed;
  s.group_by_tail = c.model.variant == model::Variant::AmlR;
  return s;
}

}  // namespace

std::optional<double> batch_loss(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw ShapeError("batch_loss: scores and labels differ in length");
  if (scores.empty()) return std::nullopt;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    total += std::max(s, 0.0) - labels[i] * s + std::log1p(std::exp(-std::abs(s)));
  }
  return total / static_cast<double>(scores.size());
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(lr >= 0.0)) throw ConfigError("lr must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (patience < 0) throw ConfigError("patience must be >= 0");
  sampler.validate();
  model.validate();
}

std::string TrainLog::to_csv() const {
  std::string out = "epoch,loss,seconds,val_metric,gnn_nodes,mlp_nodes\n";
  for (const EpochRecord& r : records) {
    out += std::to_string(r.epoch) + ",";
    if (r.loss) out += fmt_double(*r.loss);
    out += "," + fmt_double(r.seconds) + ",";
    if (r.val_metric) out += fmt_double(*r.val_metric);
    out += "," + std::to_string(r.counters.gnn_nodes) + "," +
           std::to_string(r.counters.mlp_nodes) + "\n";
  }
  return out;
}

void TrainLog::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv();
}

Trainer::Trainer(TrainConfig config, model::Model& model, graph::EdgeSet train)
    : config_(bound_to(std::move(config), model)),
      model_(model),
      sampler_(sampler_for(config_), train, train),
      fanout_rng_(stream_rng(config_.seed, "fanout")) {}

EpochRecord Trainer::train_epoch() {
  ++epoch_;
  meter_.reset();
  EpochRecord rec;
  rec.epoch = epoch_;

  const auto start = std::chrono::steady_clock::now();
  const std::vector<nn::Param*> trainable = model_.params().trainable();
  nn::AdamOptions adam;
  adam.lr = config_.lr;
  adam.weight_decay = config_.lambda;

  double loss_sum = 0.0;
  std::vector<sampling::MiniBatch> batches = sampler_.next_epoch();
  for (const sampling::MiniBatch& b : batches) {
    if (b.empty()) continue;
    // Full snapshot so an aborted batch leaves no trace, running statistics
    // included.
    const model::ModelParams before = model_.params();
    try {
      nn::Tape tape(true, &meter_);
      model::ForwardOptions opts{true, &fanout_rng_, &meter_};
      const nn::Var logits = model_.forward(tape, b.pairs, opts);
      std::vector<double> labels(b.labels.begin(), b.labels.end());
      const nn::Var loss = tape.bce_with_logits(logits, std::move(labels));
      const double value = tape.value(loss)(0, 0);
      if (!std::isfinite(value)) {
        throw NumericError("non-finite loss " + fmt_double(value) + " in epoch " +
                           std::to_string(epoch_));
      }
      tape.backward(loss);
      nn::adam_step(trainable, adam);
      loss_sum += value;
      ++rec.updates;
    } catch (const NumericError& e) {
      assign_params(model_.params(), before);
      throw TrainingAborted(e.what(), epoch_);
    }
  }
  seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (rec.updates > 0) rec.loss = loss_sum / static_cast<double>(rec.updates);
  rec.seconds = seconds_;
  rec.penalty = nn::l2_penalty(trainable, config_.lambda);
  rec.counters = meter_.counters();
  return rec;
}

void assign_params(model::ModelParams& dst, const model::ModelParams& src) {
  std::vector<nn::Param*> d = dst.tensors();
  std::vector<const nn::Param*> s = src.tensors();
  if (d.size() != s.size()) throw ShapeError("assign_params: parameter sets differ");
  for (std::size_t i = 0; i < d.size(); ++i) *d[i] = *s[i];
}

FitResult fit(const TrainConfig& config, model::Model& model, const graph::EdgeSet& train,
              const eval::EvalSplit* valid) {
  Trainer trainer(config, model, train);
  FitResult result;
  std::optional<model::ModelParams> best;
  int stale = 0;
  for (int e = 1; e <= config.epochs; ++e) {
    EpochRecord rec = trainer.train_epoch();
    const bool due = e % config.eval_every == 0 || e == config.epochs;
    if (valid != nullptr && !valid->empty() && due) {
      rec.val_metric = eval::evaluate(model, *valid, config.metric);
      if (!result.best_metric || *rec.val_metric > *result.best_metric) {
        result.best_metric = rec.val_metric;
        result.best_epoch = e;
        best = model.params();
        stale = 0;
      } else {
        ++stale;
      }
    }
    result.log.records.push_back(rec);
    if (config.patience > 0 && stale >= config.patience) break;
  }
  if (best) {
    assign_params(model.params(), *best);
  } else {
    result.best_epoch = trainer.epochs_run();
  }
  result.skipped_negatives = trainer.sampler().skipped_negatives();
  return result;
}

}  // namespace aml::train
