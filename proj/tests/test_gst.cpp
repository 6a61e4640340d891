#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "boss/gst.hpp"
#include "boss/oracle.hpp"
#include "boss/simgen.hpp"
#include "test_support.hpp"

namespace {

using namespace boss;

constexpr Var a = 0, b = 1, c = 2, d = 3;

Dag diamond_dag() {
  Dag g(4);
  g.add_edge(b, a);
  g.add_edge(d, a);
  g.add_edge(c, b);
  g.add_edge(c, d);
  return g;
}

BicScore random_bic(std::size_t p, std::size_t n, std::mt19937_64& rng) {
  SimConfig cfg;
  cfg.num_vars = p;
  cfg.n = n;
  cfg.shuffle_columns = false;
  const Dag g = testkit::random_dag(p, uniform(rng, 0.2, 0.6), rng);
  return BicScore(covariance_from_data(sample_sem(cfg, g, rng).data), 2.0);
}

PrefixMask random_prefix(std::size_t p, Var v, std::mt19937_64& rng) {
  PrefixMask mask(p, false);
  const double density = uniform01(rng);
  for (Var w = 0; w < p; ++w) mask[w] = w != v && uniform01(rng) < density;
  return mask;
}

TEST(GrowShrinkTree, ConstructionScoresTheRootOnly) {
  const auto s = oracle_score(diamond_dag());
  GrowShrinkTree tree(a, s);
  EXPECT_EQ(tree.score_calls(), 1u);
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.target(), a);
}

TEST(GrowShrinkTree, EmptyPrefix) {
  const auto s = oracle_score(diamond_dag());
  GrowShrinkTree tree(a, s);
  const LocalChoice got = tree.query(PrefixMask(4, false));
  EXPECT_TRUE(got.parents.empty());
  EXPECT_EQ(got.score, s.local(a, {}));
}

TEST(GrowShrinkTree, FigureTraces) {
  const auto s = oracle_score(diamond_dag());
  GrowShrinkTree tree(a, s);
  auto query = [&](std::vector<Var> prefix) { return tree.query(make_prefix_mask(4, prefix)).parents; };
  EXPECT_EQ(query({b, d}), (VarSet{b, d}));
  EXPECT_EQ(query({c, d}), (VarSet{c, d}));
  EXPECT_EQ(query({c}), (VarSet{c}));
  EXPECT_EQ(query({b, c}), (VarSet{b, c}));
  EXPECT_EQ(query({c, b, d}), (VarSet{b, d}));
}

TEST(GrowShrinkTree, FigureTraceScores) {
  const auto s = oracle_score(diamond_dag());
  GrowShrinkTree tree(a, s);
  // With parents {b, d}, a is d-separated from c: -BIG * 0 - 2.
  EXPECT_EQ(tree.query(make_prefix_mask(4, std::vector<Var>{b, c, d})).score, -2.0);
  // Prefix {c}: only c is available and a is still connected to b and d.
  EXPECT_EQ(tree.query(make_prefix_mask(4, std::vector<Var>{c})).score, -5.0 * 2.0 - 1.0);
}

TEST(GrowShrinkTree, RepeatedQueryIsACacheHit) {
  std::mt19937_64 rng(1);
  const BicScore s = random_bic(8, 200, rng);
  GrowShrinkTree tree(3, s);
  for (int i = 0; i < 50; ++i) {
    const PrefixMask prefix = random_prefix(8, 3, rng);
    const LocalChoice first = tree.query(prefix);
    const std::size_t calls = tree.score_calls();
    const std::size_t nodes = tree.node_count();
    EXPECT_EQ(tree.query(prefix), first);
    EXPECT_EQ(tree.score_calls(), calls);
    EXPECT_EQ(tree.node_count(), nodes);
  }
}

TEST(GrowShrinkTree, MatchesUncachedGrowShrink) {
  std::mt19937_64 rng(2);
  for (int instance = 0; instance < 10; ++instance) {
    const std::size_t p = 3 + rng() % 10;
    const BicScore s = random_bic(p, 200, rng);
    for (Var v = 0; v < p; ++v) {
      GrowShrinkTree tree(v, s);
      for (int q = 0; q < 200; ++q) {
        const PrefixMask prefix = random_prefix(p, v, rng);
        ASSERT_EQ(tree.query(prefix), grow_shrink(s, v, prefix));
      }
    }
  }
}

TEST(GrowShrinkTree, MatchesUncachedUnderTheGraphOracle) {
  std::mt19937_64 rng(3);
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t p = 3 + rng() % 5;
    const auto s = oracle_score(testkit::random_dag(p, 0.5, rng));
    for (Var v = 0; v < p; ++v) {
      GrowShrinkTree tree(v, s);
      for (int q = 0; q < 50; ++q) {
        const PrefixMask prefix = random_prefix(p, v, rng);
        ASSERT_EQ(tree.query(prefix), grow_shrink(s, v, prefix));
      }
    }
  }
}

// One expansion scores every child, so a single query can cost more than the
// uncached run; over many queries the cache must come out ahead.
TEST(GrowShrinkTree, FewerCallsThanUncachedOverManyQueries) {
  std::mt19937_64 rng(4);
  for (int instance = 0; instance < 10; ++instance) {
    const std::size_t p = 4 + rng() % 8;
    const BicScore s = random_bic(p, 200, rng);
    std::size_t cached = 0;
    CountingScore uncached(s);
    for (Var v = 0; v < p; ++v) {
      GrowShrinkTree tree(v, s);
      for (int q = 0; q < 500; ++q) {
        const PrefixMask prefix = random_prefix(p, v, rng);
        tree.query(prefix);
        grow_shrink(uncached, v, prefix);
      }
      cached += tree.score_calls();
    }
    EXPECT_LT(cached, uncached.calls());
  }
}

TEST(GrowShrinkTree, ResultsIndependentOfQueryOrder) {
  std::mt19937_64 rng(5);
  const std::size_t p = 9;
  const BicScore s = random_bic(p, 300, rng);
  std::vector<PrefixMask> prefixes;
  for (int q = 0; q < 100; ++q) prefixes.push_back(random_prefix(p, 0, rng));
  GrowShrinkTree forward(0, s), backward(0, s);
  std::vector<LocalChoice> fwd, bwd;
  for (const auto& m : prefixes) fwd.push_back(forward.query(m));
  for (auto it = prefixes.rbegin(); it != prefixes.rend(); ++it) bwd.push_back(backward.query(*it));
  std::reverse(bwd.begin(), bwd.end());
  EXPECT_EQ(fwd, bwd);
}

TEST(GrowShrinkTree, ClearKeepsAnswers) {
  std::mt19937_64 rng(6);
  const BicScore s = random_bic(7, 200, rng);
  GrowShrinkTree tree(2, s);
  const PrefixMask prefix = random_prefix(7, 2, rng);
  const LocalChoice before = tree.query(prefix);
  tree.clear();
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.query(prefix), before);
}

TEST(GrowShrinkTree, RejectsBadPrefixes) {
  const auto s = oracle_score(diamond_dag());
  GrowShrinkTree tree(a, s);
  EXPECT_THROW(tree.query(make_prefix_mask(4, std::vector<Var>{a, b})), InvalidArgument);
  EXPECT_THROW(tree.query(PrefixMask(3, false)), InvalidArgument);
  EXPECT_THROW(grow_shrink(s, a, make_prefix_mask(4, std::vector<Var>{a})), InvalidArgument);
  EXPECT_THROW(GrowShrinkTree(4, s), InvalidArgument);
}

}  // namespace
