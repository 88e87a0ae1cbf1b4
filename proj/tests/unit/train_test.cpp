#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "aml/core/error.hpp"
#include "aml/graph/synthetic.hpp"
#include "aml/nn/checkpoint.hpp"
#include "aml/train/trainer.hpp"
#include "test_support.hpp"

namespace aml::train {
namespace {

using graph::SyntheticData;
using graph::SyntheticSpec;

SyntheticData sbm(graph::NodeId n, double p_in, double p_out, std::uint64_t seed) {
  SyntheticSpec s;
  s.nodes = n;
  s.p_in = p_in;
  s.p_out = p_out;
  s.feature_dim = 8;
  return graph::generate_synthetic(s, seed);
}

TrainConfig small_train(int epochs, std::uint64_t seed) {
  TrainConfig c;
  c.epochs = epochs;
  c.lr = 0.01;
  c.seed = seed;
  c.patience = 0;
  c.sampler.batch_size = 32;
  c.model.hidden = 16;
  return c;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0;
}

// Mean BCE over every training pair plus one fixed corrupted tail each.
double full_loss(model::Model& m, const graph::EdgeSet& train) {
  const auto neg = sampling::negative_sample(train.pairs(), train.num_nodes(), 1, 99, train);
  std::vector<graph::Edge> pairs = train.pairs();
  pairs.insert(pairs.end(), neg.pairs.begin(), neg.pairs.end());
  std::vector<double> labels(train.size(), 1.0);
  labels.resize(pairs.size(), 0.0);
  return *batch_loss(m.score(pairs), labels);
}

TEST(BatchLoss, Examples) {
  std::vector<double> s0{0.0}, y1{1.0};
  EXPECT_NEAR(*batch_loss(s0, y1), std::log(2.0), 1e-15);
  std::vector<double> big{40.0};
  EXPECT_LE(*batch_loss(big, y1), 1e-12);
  std::vector<double> huge{-800.0};
  EXPECT_NEAR(*batch_loss(huge, y1), 800.0, 1e-9);
  EXPECT_FALSE(batch_loss({}, {}).has_value());
  std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(batch_loss(two, y1), ShapeError);
}

TEST(BatchLoss, MatchesHighPrecisionFormula) {
  Rng rng = stream_rng(1, "test");
  std::normal_distribution<double> d(0, 5);
  std::vector<double> s(257), y(257);
  long double want = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = d(rng);
    y[i] = static_cast<double>(rng() % 2);
    want += std::log1p(std::exp(static_cast<long double>(s[i]))) - y[i] * static_cast<long double>(s[i]);
  }
  want /= s.size();
  EXPECT_LE(std::abs(*batch_loss(s, y) - static_cast<double>(want)), 1e-12);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.epochs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lr = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lambda = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.eval_every = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(TrainEpoch, ZeroEdgeSetMakesNoUpdates) {
  Rng rng = stream_rng(2, "test");
  const graph::CsrGraph g = graph::CsrGraph::from_edges(10, {});
  model::Model m(small_train(1, 0).model, g, aml::testing::random_matrix(10, 4, rng), 0);
  Trainer t(small_train(1, 0), m, graph::EdgeSet(10, {}));
  const EpochRecord r = t.train_epoch();
  EXPECT_EQ(r.updates, 0);
  EXPECT_FALSE(r.loss.has_value());
  TrainLog log{{r}};
  EXPECT_EQ(log.to_csv().substr(0, log.to_csv().find('\n')), "epoch,loss,seconds,val_metric,gnn_nodes,mlp_nodes");
  EXPECT_NE(log.to_csv().find("\n1,,"), std::string::npos);
}

TEST(TrainEpoch, ZeroLearningRateLeavesParametersUnchanged) {
  const SyntheticData d = sbm(40, 0.3, 0.02, 3);
  TrainConfig c = small_train(1, 3);
  c.lr = 0.0;
  c.sampler.batch_size = 1 << 20;  // a single batch
  model::Model m(c.model, d.graph, d.features, 3);
  std::vector<Matrix> before;
  for (nn::Param* p : m.params().trainable()) before.push_back(p->value);
  Trainer t(c, m, d.train);
  EXPECT_EQ(t.train_epoch().updates, 1);
  const auto after = m.params().trainable();
  for (std::size_t i = 0; i < after.size(); ++i) EXPECT_TRUE(bitwise_equal(before[i], after[i]->value));
}

TEST(TrainEpoch, SmallGraphLossDecreases) {
  const SyntheticData d = sbm(20, 0.6, 0.05, 4);
  TrainConfig c = small_train(5, 4);
  c.sampler.batch_size = 8;
  model::Model m(c.model, d.graph, d.features, 4);
  Trainer t(c, m, d.train);
  std::vector<double> losses{full_loss(m, d.train)};
  for (int e = 0; e < 5; ++e) {
    t.train_epoch();
    losses.push_back(full_loss(m, d.train));
  }
  int decreases = 0;
  for (std::size_t i = 1; i < losses.size(); ++i) decreases += losses[i] < losses[i - 1];
  EXPECT_GE(decreases, 4);
}

TEST(TrainEpoch, NonFiniteLossAbortsAndRestores) {
  const SyntheticData d = sbm(30, 0.3, 0.02, 5);
  TrainConfig c = small_train(1, 5);
  model::Model m(c.model, d.graph, d.features, 5);
  m.params().theta2.value(0, 0) = std::nan("");
  std::vector<Matrix> before;
  for (nn::Param* p : m.params().trainable()) before.push_back(p->value);
  Trainer t(c, m, d.train);
  try {
    t.train_epoch();
    FAIL() << "expected TrainingAborted";
  } catch (const TrainingAborted& e) {
    EXPECT_EQ(e.epoch(), 1);
  }
  const auto after = m.params().trainable();
  for (std::size_t i = 0; i < after.size(); ++i) EXPECT_TRUE(bitwise_equal(before[i], after[i]->value));
}

TEST(TrainEpoch, RowWiseTouchesEachEdgeOnce) {
  const SyntheticData d = sbm(100, 0.2, 0.02, 6);
  TrainConfig c = small_train(1, 6);
  c.sampler.negatives_per_positive = 0;
  model::Model m(c.model, d.graph, d.features, 6);
  Trainer t(c, m, d.train);
  std::size_t covered = 0;
  sampling::Sampler s(sampling::SamplerConfig{c.sampler.strategy, c.sampler.batch_size, c.seed, 0, false},
                      d.train, d.train);
  for (const auto& b : s.next_epoch()) covered += b.num_positives;
  EXPECT_EQ(covered, d.train.size());
  const EpochRecord r = t.train_epoch();
  EXPECT_EQ(r.counters.gnn_nodes, static_cast<std::int64_t>(d.train.num_heads()));
}

TEST(Fit, PatienceZeroRunsEveryEpoch) {
  const SyntheticData d = sbm(40, 0.3, 0.02, 7);
  const eval::EvalSplit valid = eval::EvalSplit::from_edge_set(d.valid);
  TrainConfig c = small_train(4, 7);
  c.lr = 0.0;  // validation can never improve after the first evaluation
  model::Model a(c.model, d.graph, d.features, 7);
  EXPECT_EQ(fit(c, a, d.train, &valid).log.records.size(), 4u);
  c.patience = 1;
  model::Model b(c.model, d.graph, d.features, 7);
  const FitResult r = fit(c, b, d.train, &valid);
  EXPECT_EQ(r.log.records.size(), 2u);
  EXPECT_EQ(r.best_epoch, 1);
}

TEST(Fit, LogInvariantsAndDeterminism) {
  const SyntheticData d = sbm(60, 0.3, 0.02, 8);
  const eval::EvalSplit valid = eval::EvalSplit::from_edge_set(d.valid);
  TrainConfig c = small_train(4, 8);
  c.eval_every = 3;
  model::Model a(c.model, d.graph, d.features, 8);
  model::Model b(c.model, d.graph, d.features, 8);
  const FitResult x = fit(c, a, d.train, &valid);
  const FitResult y = fit(c, b, d.train, &valid);
  ASSERT_EQ(x.log.records.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(x.log.records[i].epoch, static_cast<int>(i) + 1);
    EXPECT_EQ(x.log.records[i].loss, y.log.records[i].loss);
    if (i > 0) EXPECT_GE(x.log.records[i].seconds, x.log.records[i - 1].seconds);
    EXPECT_EQ(x.log.records[i].val_metric.has_value(), i == 2 || i == 3);
  }
  const auto pa = a.params().tensors();
  const auto pb = b.params().tensors();
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_TRUE(bitwise_equal(pa[i]->value, pb[i]->value));
}

TEST(Fit, ChainGraphBeatsRandomScorer) {
  SyntheticSpec s;
  s.kind = graph::SyntheticKind::Chain;
  s.nodes = 60;
  s.feature_dim = 8;
  s.valid_frac = 0.2;
  s.test_frac = 0.0;
  s.eval_negatives = 3;
  const SyntheticData d = graph::generate_synthetic(s, 9);
  const eval::EvalSplit valid = eval::EvalSplit::from_edge_set(d.valid);
  TrainConfig c = small_train(20, 9);
  c.metric = eval::MetricSpec{eval::MetricKind::Hits, 1};
  model::Model m(c.model, d.graph, d.features, 9);
  const FitResult r = fit(c, m, d.train, &valid);
  // Random scorer: mean over many uniform draws of the same protocol.
  Rng rng = stream_rng(9, "random-scorer");
  std::uniform_real_distribution<double> u(0, 1);
  double baseline = 0;
  const int draws = 2000;
  for (int k = 0; k < draws; ++k) {
    std::vector<double> pos(valid.positives.size()), neg(valid.negatives.size());
    for (double& x : pos) x = u(rng);
    for (double& x : neg) x = u(rng);
    baseline += eval::metric_from_scores(valid, pos, neg, c.metric);
  }
  baseline /= draws;
  ASSERT_TRUE(r.best_metric.has_value());
  EXPECT_GE(*r.best_metric, baseline);
}

TEST(Fit, SeparableSbmLossDropsForEverySeed) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SyntheticData d = sbm(60, 0.9, 0.05, seed);
    TrainConfig c = small_train(5, seed);
    model::Model m(c.model, d.graph, d.features, seed);
    const double initial = full_loss(m, d.train);
    fit(c, m, d.train, nullptr);
    EXPECT_LT(full_loss(m, d.train), initial) << "seed " << seed;
  }
}

TEST(Fit, CheckpointRoundTripGivesIdenticalScores) {
  const SyntheticData d = sbm(50, 0.3, 0.02, 10);
  const eval::EvalSplit valid = eval::EvalSplit::from_edge_set(d.valid);
  TrainConfig c = small_train(3, 10);
  c.model.batch_norm = true;
  model::Model m(c.model, d.graph, d.features, 10);
  fit(c, m, d.train, &valid);
  const auto path = aml::testing::scratch_dir("train_ckpt") / "model.bin";
  const std::vector<const nn::Param*> saved = std::as_const(m).params().tensors();
  nn::save_checkpoint(path, saved);
  model::Model fresh(c.model, d.graph, d.features, 77);
  const std::vector<nn::Param*> dst = fresh.params().tensors();
  nn::load_checkpoint(path, dst);
  std::vector<graph::Edge> pairs = valid.positives;
  pairs.insert(pairs.end(), valid.negatives.begin(), valid.negatives.end());
  EXPECT_EQ(m.score(pairs), fresh.score(pairs));
  EXPECT_EQ(eval::evaluate(m, valid, c.metric), eval::evaluate(fresh, valid, c.metric));
}

}  // namespace
}  // namespace aml::train
