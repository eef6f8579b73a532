#include <gtest/gtest.h>

#include <random>

#include "tenantalloc/matching.hpp"
#include "tenantalloc/mechanisms.hpp"
#include "test_support.hpp"

namespace ta = tenantalloc;

TEST(Matching, UniqueMaximizer) {
  ta::WeightedBipartiteGraph g(2, 2);
  g.set_edge(0, 0, 1);
  g.set_edge(0, 1, 0);
  g.set_edge(1, 0, 0);
  g.set_edge(1, 1, 0);
  const auto m = ta::max_weight_perfect_matching(g);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->mate, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(m->weight, 1);
}

TEST(Matching, HallViolation) {
  ta::WeightedBipartiteGraph g(2, 2);
  g.set_edge(0, 0, 1);
  g.set_edge(0, 1, 1);
  EXPECT_FALSE(ta::max_weight_perfect_matching(g));
  EXPECT_FALSE(ta::has_perfect_matching(g));
}

TEST(Matching, Feasibility) {
  ta::WeightedBipartiteGraph complete(3, 3);
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t r = 0; r < 3; ++r) complete.set_edge(l, r, 0);
  EXPECT_TRUE(ta::has_perfect_matching(complete));

  ta::WeightedBipartiteGraph isolated(3, 3);
  for (std::size_t l = 1; l < 3; ++l)
    for (std::size_t r = 0; r < 3; ++r) isolated.set_edge(l, r, 1);
  EXPECT_FALSE(ta::has_perfect_matching(isolated));

  EXPECT_TRUE(ta::has_perfect_matching(ta::build_msir_graph(ta::testing::e2()).graph));
}

TEST(Matching, EmptyGraphHasEmptyMatching) {
  const auto m = ta::max_weight_perfect_matching(ta::WeightedBipartiteGraph(0, 0));
  ASSERT_TRUE(m);
  EXPECT_TRUE(m->mate.empty());
  EXPECT_EQ(m->weight, 0);
}

TEST(Matching, UnbalancedGraphRejected) {
  ta::WeightedBipartiteGraph g(2, 3);
  try {
    ta::max_weight_perfect_matching(g);
    FAIL();
  } catch (const ta::Error& e) {
    EXPECT_EQ(e.code(), ta::ErrorCode::unbalanced_graph);
  }
  EXPECT_THROW(ta::has_perfect_matching(g), ta::Error);
}

TEST(Matching, ExampleMarketMsirGraphWeight) {
  const auto g = ta::build_msir_graph(ta::testing::e1()).graph;
  const auto brute = ta::testing::brute_force_matching(g);
  ASSERT_TRUE(brute);
  EXPECT_EQ(brute->weight, 5);
  const auto m = ta::max_weight_perfect_matching(g);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->weight, 5);
}

TEST(Matching, RemoveZeroEdges) {
  ta::WeightedBipartiteGraph g(3, 3);
  g.set_edge(0, 0, 0);
  g.set_edge(0, 1, 1);
  g.set_edge(0, 2, 0);
  g.set_edge(1, 0, 1);
  g.set_edge(1, 2, 1);
  const auto before = g;
  auto delta = ta::remove_zero_edges(g, 0);
  EXPECT_EQ(delta.removed.size(), 2u);
  EXPECT_FALSE(g.has_edge(0, 0));
  EXPECT_TRUE(g.has_edge(0, 1));
  delta.restore(g);
  EXPECT_EQ(g, before);

  EXPECT_TRUE(ta::remove_zero_edges(g, 1).empty());
  EXPECT_THROW(ta::remove_zero_edges(g, 3), ta::Error);
}

TEST(Matching, RemoveZeroEdgesOnExampleMarket) {
  auto g = ta::build_msir_graph(ta::testing::e1()).graph;
  const auto delta = ta::remove_zero_edges(g, 3);
  ASSERT_EQ(delta.removed.size(), 1u);
  EXPECT_EQ(delta.removed[0].first, 3u);  // h4
}

TEST(MatchingProperty, AgreesWithBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = trial % 8 + 1;
    const double density = 0.2 + 0.1 * (trial % 7);
    const auto g = ta::testing::random_graph(rng, n, density);
    const auto brute = ta::testing::brute_force_matching(g);
    const auto fast = ta::max_weight_perfect_matching(g);
    ASSERT_EQ(brute.has_value(), fast.has_value()) << "trial " << trial;
    ASSERT_EQ(ta::has_perfect_matching(g), brute.has_value()) << "trial " << trial;
    if (!brute) continue;
    ASSERT_EQ(fast->weight, brute->weight) << "trial " << trial;
    // Canonical tie-break: lexicographically smallest optimal mate sequence.
    ASSERT_EQ(fast->mate, brute->mate) << "trial " << trial;
    int sum = 0;
    for (std::size_t l = 0; l < n; ++l) {
      ASSERT_TRUE(g.has_edge(l, fast->mate[l]));
      sum += *g.edge(l, fast->mate[l]);
    }
    ASSERT_EQ(sum, fast->weight);
  }
}

TEST(MatchingProperty, RemovalNeverIncreasesOptimumAndRestoreIsExact) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = trial % 7 + 1;
    auto g = ta::testing::random_graph(rng, n, 0.7);
    const auto before = ta::max_weight_perfect_matching(g);
    const auto snapshot = g;
    auto delta = ta::remove_zero_edges(g, trial % n);
    const auto after = ta::max_weight_perfect_matching(g);
    if (after) {
      ASSERT_TRUE(before);
      ASSERT_LE(after->weight, before->weight);
    }
    delta.restore(g);
    ASSERT_EQ(g, snapshot);
    ASSERT_EQ(ta::max_weight_perfect_matching(g), before);
  }
}

TEST(MatchingProperty, Deterministic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = ta::testing::random_graph(rng, 6, 0.6);
    const auto copy = g;
    ASSERT_EQ(ta::max_weight_perfect_matching(g), ta::max_weight_perfect_matching(copy));
  }
}

TEST(Matching, IntegralWeightsBeyondBinary) {
  ta::BasicBipartiteGraph<long> g(3, 3);
  const long w[3][3] = {{7, 3, -2}, {4, 9, 1}, {5, 5, 6}};
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t r = 0; r < 3; ++r) g.set_edge(l, r, w[l][r]);
  const auto m = ta::max_weight_perfect_matching(g);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->weight, 22);  // 7 + 9 + 6
}
