#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "aml/core/error.hpp"
#include "aml/sampling/sampler.hpp"
#include "test_support.hpp"

namespace aml::sampling {
namespace {

using aml::testing::random_digraph;

std::vector<Edge> sorted(std::vector<Edge> v) {
  std::sort(v.begin(), v.end(), [](const Edge& a, const Edge& b) {
    return a.head != b.head ? a.head < b.head : a.tail < b.tail;
  });
  return v;
}

std::vector<Edge> epoch_positives(const std::vector<MiniBatch>& batches) {
  std::vector<Edge> all;
  for (const MiniBatch& b : batches) {
    all.insert(all.end(), b.pairs.begin(), b.pairs.begin() + static_cast<std::ptrdiff_t>(b.num_positives));
  }
  return sorted(all);
}

bool same_edges(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const Edge& x, const Edge& y) {
           return x.head == y.head && x.tail == y.tail;
         });
}

TEST(RowWise, HeadBlockTakesAllItsPairs) {
  EdgeSet e(4, {{0, 1}, {0, 2}, {2, 3}});
  // B = 1 with |E|/N = 3/4 rounds to a single head per batch.
  EXPECT_EQ(heads_per_batch(1, 4, 3), 1);
  const auto batches = rowwise_epoch(e, 1, 0);
  ASSERT_EQ(batches.size(), 2u);  // heads 1 and 3 have no pairs
  for (const MiniBatch& b : batches) {
    ASSERT_EQ(b.distinct_heads.size(), 1u);
    if (b.distinct_heads[0] == 0) {
      EXPECT_TRUE(same_edges(sorted(b.pairs), {{0, 1}, {0, 2}}));
    } else {
      EXPECT_EQ(b.distinct_heads[0], 2);
      EXPECT_TRUE(same_edges(b.pairs, {{2, 3}}));
    }
  }
}

TEST(RowWise, HeadsPerBatchAtCollabScale) {
  EXPECT_EQ(heads_per_batch(65536, 235868, 1179052), 13110);
  EXPECT_EQ(heads_per_batch(1, 10, 1000), 1);
  EXPECT_EQ(heads_per_batch(5, 0, 0), 1);
}

TEST(Sampling, PartitionPropertyBothStrategies) {
  Rng rng = stream_rng(1, "test");
  for (int trial = 0; trial < 20; ++trial) {
    const NodeId n = 50 + static_cast<NodeId>(rng() % 400);
    const EdgeSet e = EdgeSet::from_graph(random_digraph(n, 0.02 + 0.03 * (trial % 3), rng));
    const auto want = sorted(e.pairs());
    const std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 200);
    EXPECT_TRUE(same_edges(epoch_positives(rowwise_epoch(e, b, trial)), want));
    EXPECT_TRUE(same_edges(epoch_positives(edgewise_epoch(e, b, trial)), want));
  }
}

TEST(RowWise, HeadLocalityAndLabels) {
  Rng rng = stream_rng(2, "test");
  const EdgeSet e = EdgeSet::from_graph(random_digraph(300, 0.05, rng));
  const std::int64_t b = 100;
  const auto heads = heads_per_batch(b, 300, static_cast<std::int64_t>(e.size()));
  for (const MiniBatch& mb : rowwise_epoch(e, b, 3)) {
    EXPECT_LE(static_cast<std::int64_t>(mb.distinct_heads.size()), heads);
    std::set<NodeId> hs;
    for (const Edge& p : mb.pairs) hs.insert(p.head);
    EXPECT_TRUE(std::equal(hs.begin(), hs.end(), mb.distinct_heads.begin(), mb.distinct_heads.end()));
    for (auto l : mb.labels) EXPECT_EQ(l, 1);
  }
}

TEST(RowWise, MeanBatchEdgeCountMatchesExpectation) {
  Rng rng = stream_rng(3, "test");
  for (NodeId n : {1000, 2000}) {
    const EdgeSet e = EdgeSet::from_graph(random_digraph(n, 0.005, rng));
    ASSERT_GE(e.size(), 1000u);
    const std::int64_t b = 100;
    const double heads = static_cast<double>(heads_per_batch(b, n, static_cast<std::int64_t>(e.size())));
    const auto batches = rowwise_epoch(e, b, 11);
    const double mean = static_cast<double>(e.size()) / static_cast<double>(batches.size());
    const double expected = heads * static_cast<double>(e.size()) / n;
    EXPECT_LE(std::abs(mean - expected) / expected, 0.05);
  }
}

TEST(EdgeWise, BatchSizes) {
  std::vector<Edge> pairs;
  for (int i = 0; i < 10; ++i) pairs.push_back({i, (i + 1) % 10});
  EdgeSet e(10, pairs);
  std::vector<std::size_t> sizes;
  for (const MiniBatch& b : edgewise_epoch(e, 3, 0)) sizes.push_back(b.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 3, 1}));
  EXPECT_EQ(edgewise_epoch(e, 10, 0).size(), 1u);
  EXPECT_EQ(edgewise_epoch(e, 1000, 0).size(), 1u);
}

TEST(EdgeWise, FewRepeatedHeadsOnLargeSparseGraph) {
  Rng rng = stream_rng(4, "test");
  const std::int64_t b = 50;
  const NodeId n = static_cast<NodeId>(100 * b);
  const EdgeSet e = EdgeSet::from_graph(random_digraph(n, 6.0 / n, rng));
  double repeats = 0;
  const auto batches = edgewise_epoch(e, b, 5);
  std::size_t full = 0;
  for (const MiniBatch& mb : batches) {
    if (static_cast<std::int64_t>(mb.size()) != b) continue;
    repeats += static_cast<double>(mb.size() - mb.distinct_heads.size());
    ++full;
  }
  EXPECT_LE(repeats / static_cast<double>(full) / static_cast<double>(b), 0.1);
}

TEST(Negatives, Examples) {
  EdgeSet e(2, {{0, 1}});
  std::vector<Edge> pos{{0, 1}};
  EXPECT_TRUE(negative_sample(pos, 2, 0, 1, e).pairs.empty());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NegativeResult r = negative_sample(pos, 2, 1, seed, e);
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0].head, 0);
    EXPECT_EQ(r.pairs[0].tail, 0);
  }
}

TEST(Negatives, NeverHitExclusion) {
  Rng rng = stream_rng(5, "test");
  const EdgeSet e = EdgeSet::from_graph(random_digraph(40, 0.3, rng));
  const std::vector<Edge> pos(e.pairs().begin(), e.pairs().begin() + 100);
  const NegativeResult r = negative_sample(pos, 40, 100, 6, e);
  EXPECT_EQ(r.pairs.size(), 10000u);
  for (const Edge& p : r.pairs) EXPECT_FALSE(e.contains(p.head, p.tail));
  const NegativeResult h = negative_sample(pos, 40, 3, 6, e, true);
  for (std::size_t i = 0; i < h.pairs.size(); ++i) {
    EXPECT_EQ(h.pairs[i].tail, pos[i / 3].tail);
    EXPECT_FALSE(e.contains(h.pairs[i].head, h.pairs[i].tail));
  }
}

TEST(Negatives, CompleteGraphSkips) {
  std::vector<Edge> all;
  for (NodeId i = 0; i < 3; ++i)
    for (NodeId j = 0; j < 3; ++j) all.push_back({i, j});
  EdgeSet e(3, all);
  const NegativeResult r = negative_sample(std::span<const Edge>(all.data(), 2), 3, 2, 0, e);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.skipped, 4);
}

TEST(Sampling, DeterministicPerSeed) {
  Rng rng = stream_rng(6, "test");
  const EdgeSet e = EdgeSet::from_graph(random_digraph(200, 0.05, rng));
  for (Strategy s : {Strategy::RowWise, Strategy::EdgeWise}) {
    SamplerConfig c;
    c.strategy = s;
    c.batch_size = 64;
    c.seed = 9;
    Sampler a(c, e, e), b(c, e, e);
    for (int epoch = 0; epoch < 2; ++epoch) {
      const auto x = a.next_epoch();
      const auto y = b.next_epoch();
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_TRUE(same_edges(x[i].pairs, y[i].pairs));
        EXPECT_EQ(x[i].labels, y[i].labels);
      }
    }
  }
}

TEST(Sampler, AttachesLabelledNegatives) {
  Rng rng = stream_rng(7, "test");
  const EdgeSet e = EdgeSet::from_graph(random_digraph(100, 0.05, rng));
  SamplerConfig c;
  c.batch_size = 50;
  c.negatives_per_positive = 2;
  Sampler s(c, e, e);
  for (const MiniBatch& b : s.next_epoch()) {
    EXPECT_EQ(b.size(), 3 * b.num_positives);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.labels[i], i < b.num_positives ? 1 : 0);
    // Negatives keep the head, so row-wise head locality survives.
    std::set<NodeId> pos_heads;
    for (std::size_t i = 0; i < b.num_positives; ++i) pos_heads.insert(b.pairs[i].head);
    EXPECT_EQ(pos_heads.size(), b.distinct_heads.size());
  }
}

TEST(Sampler, GroupByTailKeepsOrientation) {
  Rng rng = stream_rng(8, "test");
  const EdgeSet e = EdgeSet::from_graph(random_digraph(120, 0.05, rng));
  SamplerConfig c;
  c.batch_size = 40;
  c.group_by_tail = true;
  Sampler s(c, e, e);
  const auto batches = s.next_epoch();
  EXPECT_TRUE(same_edges(epoch_positives(batches), sorted(e.pairs())));
  const auto per = heads_per_batch(40, 120, static_cast<std::int64_t>(e.size()));
  for (const MiniBatch& b : batches) {
    std::set<NodeId> tails;
    for (std::size_t i = 0; i < b.num_positives; ++i) tails.insert(b.pairs[i].tail);
    EXPECT_LE(static_cast<std::int64_t>(tails.size()), per);
    for (std::size_t i = b.num_positives; i < b.size(); ++i) EXPECT_TRUE(tails.count(b.pairs[i].tail));
  }
}

TEST(SamplerConfig, Validation) {
  SamplerConfig c;
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.batch_size = 1;
  c.negatives_per_positive = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(parse_strategy("nodewise"), ConfigError);
}

}  // namespace
}  // namespace aml::sampling
