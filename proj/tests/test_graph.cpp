#include <random>
#include <set>

#include <gtest/gtest.h>

#include "boss/graph.hpp"
#include "boss/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace boss;
using boss::testkit::MecOracle;

constexpr Var a = 0, b = 1, c = 2, d = 3;

Dag make_dag(std::size_t p, std::initializer_list<Edge> edges) {
  Dag g(p);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

Dag diamond_dag() { return make_dag(4, {{b, a}, {d, a}, {c, b}, {c, d}}); }

const MecOracle& oracle(std::size_t p) {
  static std::map<std::size_t, MecOracle> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, MecOracle(p)).first;
  return it->second;
}

TEST(Graph, ParentsReadOff) {
  EXPECT_EQ(parents(make_dag(3, {{0, 1}, {1, 2}}), 1), (VarSet{0}));
  EXPECT_TRUE(parents(Dag(3), 2).empty());
  EXPECT_EQ(parents(diamond_dag(), a), (VarSet{b, d}));
  EXPECT_THROW(parents(Dag(3), 3), InvalidArgument);
}

TEST(Graph, DagRejectsSelfLoopsAndDuplicates) {
  Dag g(3);
  EXPECT_THROW(g.add_edge(1, 1), InvalidArgument);
  g.add_edge(0, 1);
  EXPECT_THROW(g.add_edge(0, 1), InvalidArgument);
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(Graph, IsAcyclic) {
  EXPECT_TRUE(is_acyclic(make_dag(3, {{0, 1}, {1, 2}})));
  EXPECT_FALSE(is_acyclic(make_dag(2, {{0, 1}, {1, 0}})));
  EXPECT_TRUE(is_acyclic(Dag(4)));
  EXPECT_FALSE(is_acyclic(make_dag(3, {{0, 1}, {1, 2}, {2, 0}})));
}

TEST(Graph, PdagKeepsAdjacenciesDisjoint) {
  Pdag g(3);
  g.add_directed(0, 1);
  EXPECT_THROW(g.add_undirected(1, 0), InvalidArgument);
  EXPECT_THROW(g.add_directed(1, 0), InvalidArgument);
  EXPECT_THROW(g.add_undirected(2, 2), InvalidArgument);
  g.add_undirected(2, 1);
  EXPECT_TRUE(g.has_undirected(1, 2));
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(FindCompelled, SmallExamples) {
  Pdag chain(3);
  chain.add_undirected(0, 1);
  chain.add_undirected(1, 2);
  EXPECT_EQ(find_compelled(make_dag(3, {{0, 1}, {1, 2}})), chain);

  Pdag collider(3);
  collider.add_directed(0, 1);
  collider.add_directed(2, 1);
  EXPECT_EQ(find_compelled(make_dag(3, {{0, 1}, {2, 1}})), collider);

  Pdag single(2);
  single.add_undirected(0, 1);
  EXPECT_EQ(find_compelled(make_dag(2, {{0, 1}})), single);
}

TEST(FindCompelled, SmallExamplesMatchOracle) {
  for (const Dag& g : {make_dag(3, {{0, 1}, {1, 2}}), make_dag(3, {{0, 1}, {2, 1}})}) {
    EXPECT_EQ(find_compelled(g), oracle(3).cpdag(g));
  }
  EXPECT_EQ(find_compelled(make_dag(2, {{0, 1}})), oracle(2).cpdag(make_dag(2, {{0, 1}})));
}

TEST(FindCompelled, RejectsNonTopologicalOrder) {
  const Dag g = make_dag(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(find_compelled(g, Permutation({2, 1, 0})), InvalidArgument);
}

TEST(FindCompelled, OracleCountsAreKnown) {
  // Labelled DAG counts (OEIS A003024) and equivalence class counts (A007984).
  EXPECT_EQ(oracle(3).num_dags(), 25u);
  EXPECT_EQ(oracle(4).num_dags(), 543u);
  EXPECT_EQ(oracle(3).num_classes(), 11u);
  EXPECT_EQ(oracle(4).num_classes(), 185u);
}

TEST(FindCompelled, ExhaustiveUpToFourVariables) {
  for (std::size_t p = 1; p <= 4; ++p) {
    oracle(p).for_each_dag([&](const Dag& g) {
      ASSERT_EQ(find_compelled(g), oracle(p).cpdag(g)) << "p=" << p;
    });
  }
}

TEST(FindCompelled, RandomFiveVariableDags) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 150; ++i) {
    const Dag g = testkit::random_dag(5, uniform(rng, 0.2, 0.8), rng);
    ASSERT_EQ(find_compelled(g), oracle(5).cpdag(g));
  }
}

TEST(FindCompelled, AnyTopologicalOrderGivesTheSameCpdag) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Dag g = testkit::random_dag(6, 0.5, rng);
    const Pdag expected = find_compelled(g);
    // Random topological order: Kahn's algorithm with a random pick.
    std::vector<std::size_t> indeg(6);
    for (Var v = 0; v < 6; ++v) indeg[v] = g.parents(v).size();
    std::vector<Var> order;
    std::vector<Var> ready;
    for (Var v = 0; v < 6; ++v) {
      if (indeg[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
      const std::size_t k = rng() % ready.size();
      const Var v = ready[k];
      ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
      order.push_back(v);
      for (Var w : g.children(v)) {
        if (--indeg[w] == 0) ready.push_back(w);
      }
    }
    ASSERT_EQ(find_compelled(g, Permutation(order)), expected);
  }
}

TEST(FindCompelled, PreservesSkeleton) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Dag g = testkit::random_dag(7, 0.4, rng);
    const Pdag cp = find_compelled(g);
    ASSERT_EQ(cp.num_edges(), g.num_edges());
    for (const auto& [u, v] : g.edges()) ASSERT_TRUE(cp.adjacent(u, v));
  }
}

TEST(FindCompelled, SameClassSamePdag) {
  const auto& o = oracle(4);
  o.for_each_dag([&](const Dag& g) {
    const Pdag cp = find_compelled(g);
    for (const Dag& m : o.members(g)) ASSERT_EQ(find_compelled(m), cp);
  });
}

TEST(ConsistentExtension, ReturnsAClassMember) {
  const auto& o = oracle(4);
  o.for_each_dag([&](const Dag& g) {
    const Dag ext = consistent_extension(find_compelled(g));
    const auto& members = o.members(g);
    ASSERT_NE(std::find(members.begin(), members.end(), ext), members.end());
  });
}

TEST(ConsistentExtension, RejectsPdagWithoutExtension) {
  // Undirected 4-cycle has no extension without a new v-structure.
  Pdag g(4);
  g.add_undirected(0, 1);
  g.add_undirected(1, 2);
  g.add_undirected(2, 3);
  g.add_undirected(3, 0);
  EXPECT_THROW(consistent_extension(g), InvalidArgument);
}

TEST(CpdagEqual, Basics) {
  Pdag x(3);
  x.add_directed(0, 1);
  x.add_undirected(1, 2);
  EXPECT_TRUE(cpdag_equal(x, x));

  Pdag directed(2), undirected(2);
  directed.add_directed(0, 1);
  undirected.add_undirected(0, 1);
  EXPECT_FALSE(cpdag_equal(directed, undirected));

  Pdag y(3);
  y.add_undirected(2, 1);
  y.add_directed(0, 1);
  EXPECT_TRUE(cpdag_equal(x, y));
  EXPECT_THROW(cpdag_equal(x, Pdag(4)), InvalidArgument);
}

TEST(DSeparation, BayesBallMatchesMoralisation) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Dag g = testkit::random_dag(6, 0.4, rng);
    for (Var x = 0; x < 6; ++x) {
      for (Var y = x + 1; y < 6; ++y) {
        std::vector<Var> z;
        for (Var w = 0; w < 6; ++w) {
          if (w != x && w != y && (rng() & 1U)) z.push_back(w);
        }
        ASSERT_EQ(d_separated(g, x, y, z), testkit::dsep_moral(g, x, y, z));
      }
    }
  }
}

}  // namespace
