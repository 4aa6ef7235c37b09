#include <gtest/gtest.h>

#include <random>

#include "fairpart/oracle.hpp"
#include "fairpart/treewidth_dp.hpp"
#include "support.hpp"

using namespace fairpart;
using fairpart::testing::random_forest_edges;

namespace {

/// Nice decomposition from a path decomposition given as a sequence of bags.
NiceTreeDecomposition nice_from_path(const std::vector<std::vector<AgentId>>& bags) {
  std::vector<TdNode> nodes;
  std::vector<AgentId> current;
  auto push = [&](NodeKind kind, AgentId a) {
    TdNode node;
    node.id = static_cast<int>(nodes.size());
    node.kind = kind;
    node.agent = a;
    node.bag = current;
    if (!nodes.empty()) nodes.back().parent = node.id;
    nodes.push_back(node);
  };
  push(NodeKind::Leaf, -1);
  std::vector<std::vector<AgentId>> all = bags;
  all.emplace_back();
  for (auto bag : all) {
    std::sort(bag.begin(), bag.end());
    for (AgentId a : std::vector<AgentId>(current)) {
      if (!std::binary_search(bag.begin(), bag.end(), a)) {
        current.erase(std::find(current.begin(), current.end(), a));
        push(NodeKind::Forget, a);
      }
    }
    for (AgentId a : bag) {
      if (!std::binary_search(current.begin(), current.end(), a)) {
        current.insert(std::lower_bound(current.begin(), current.end(), a), a);
        push(NodeKind::Introduce, a);
      }
    }
  }
  return NiceTreeDecomposition(nodes);
}

/// Random graph whose edges join agents at most `span` apart, with its window decomposition.
std::pair<Instance, NiceTreeDecomposition> banded_instance(std::mt19937_64& rng, int n, int k, int span) {
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b = a + 1; b <= std::min(n - 1, a + span); ++b) {
      if (rng() % 2) edges.emplace_back(a, b);
    }
  }
  std::vector<std::vector<AgentId>> bags;
  for (AgentId t = 0; t + span < n || t == 0; ++t) {
    std::vector<AgentId> bag;
    for (AgentId a = t; a <= std::min(n - 1, t + span); ++a) bag.push_back(a);
    bags.push_back(bag);
  }
  return {make_binary_instance(n, k, edges), nice_from_path(bags)};
}

void expect_matches_oracle(const Instance& inst, const NiceTreeDecomposition& td, const SizeVector& sv) {
  for (FairnessNotion notion : kAllNotions) {
    TreewidthDp dp(inst, notion, sv, td);
    auto oracle = exists_fair(inst, notion, sv);
    ASSERT_EQ(dp.found(), oracle.partition.has_value())
        << to_string(notion) << "\n" << serialize_instance(with_sizes(inst, sv));
    if (dp.found()) {
      Partition p = dp.reconstruct();
      EXPECT_EQ(validate_partition(p, inst.n(), sv), std::nullopt);
      auto shares = compute_shares(inst, sv, notion == FairnessNotion::MMS);
      EXPECT_TRUE(is_fair(inst, p, notion, shares)) << to_string(notion) << "\n" << serialize_instance(inst);
    }
  }
}

}  // namespace

TEST(NiceDecomposeForest, SingleEdgeShape) {
  auto g = make_binary_instance(2, 1, {{0, 1}}).graph;
  auto td = nice_decompose_forest(g);
  EXPECT_EQ(td.verify(g), std::nullopt);
  std::vector<NodeKind> kinds;
  for (int x : td.post_order()) kinds.push_back(td.node(x).kind);
  EXPECT_EQ(kinds, (std::vector<NodeKind>{NodeKind::Leaf, NodeKind::Introduce, NodeKind::Introduce,
                                          NodeKind::Forget, NodeKind::Forget}));
  EXPECT_EQ(td.width(), 1);
}

TEST(NiceDecomposeForest, PathThreeHasWidthOne) {
  auto g = make_binary_instance(3, 1, {{0, 1}, {1, 2}}).graph;
  auto td = nice_decompose_forest(g);
  EXPECT_EQ(td.verify(g), std::nullopt);
  EXPECT_EQ(td.width(), 1);
}

TEST(NiceDecomposeForest, DisjointEdgesGlueUnderEmptyJoin) {
  auto g = make_binary_instance(4, 1, {{0, 1}, {2, 3}}).graph;
  auto td = nice_decompose_forest(g);
  EXPECT_EQ(td.verify(g), std::nullopt);
  const TdNode& root = td.node(td.root());
  EXPECT_EQ(root.kind, NodeKind::Join);
  EXPECT_TRUE(root.bag.empty());
  int joins = 0;
  for (const auto& node : td.nodes()) joins += node.kind == NodeKind::Join;
  EXPECT_EQ(joins, 1);
}

TEST(NiceDecomposeForest, RandomForestsAreValidAndLinear) {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 100; ++iter) {
    int n = 1 + static_cast<int>(rng() % 60);
    auto g = make_binary_instance(n, 1, random_forest_edges(rng, n, 1 + iter % 4)).graph;
    auto td = nice_decompose_forest(g);
    EXPECT_EQ(td.verify(g), std::nullopt);
    EXPECT_LE(td.width(), 1);
    EXPECT_LE(td.size(), 5 * n);
  }
  auto cycle = make_binary_instance(3, 1, {{0, 1}, {1, 2}, {2, 0}}).graph;
  EXPECT_THROW(nice_decompose_forest(cycle), NotApplicable);
}

TEST(TreewidthDp, PathThree) {
  auto inst = make_binary_instance(3, 2, {{0, 1}, {1, 2}});
  auto td = nice_decompose_forest(inst.graph);
  EXPECT_FALSE(dp_exists(inst, FairnessNotion::EF, inst.sizes, td));
  TreewidthDp efx0(inst, FairnessNotion::EFX0, inst.sizes, td);
  ASSERT_TRUE(efx0.found());
  auto shares = compute_shares(inst, inst.sizes, false);
  EXPECT_TRUE(is_fair(inst, efx0.reconstruct(), FairnessNotion::EFX0, shares));
}

TEST(TreewidthDp, PathSixEfIsThreeAdjacentPairs) {
  auto inst = make_binary_instance(6, 3, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  auto p = dp_solve(inst, FairnessNotion::EF);
  ASSERT_TRUE(p);
  for (AgentId a = 0; a < 6; a += 2) EXPECT_EQ(p->part_of(a), p->part_of(a + 1));
}

TEST(TreewidthDp, StarWithFourLeavesHasNoProp) {
  auto inst = make_binary_instance(5, 2, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_FALSE(dp_solve(inst, FairnessNotion::PROP));
  EXPECT_TRUE(dp_solve(inst, FairnessNotion::MMS));
}

TEST(TreewidthDp, ZeroSharesAcceptAnySizeCorrectPartition) {
  auto inst = make_binary_instance(5, 3, {});
  auto p = dp_solve(inst, FairnessNotion::MMS);
  ASSERT_TRUE(p);
  EXPECT_EQ(validate_partition(*p, 5, inst.sizes), std::nullopt);
}

TEST(TreewidthDp, RejectsNonBinaryAndInvalidDecompositions) {
  auto weighted = make_instance(2, 1, {{{0, 1}, 2}, {{1, 0}, 1}});
  EXPECT_THROW(dp_solve(weighted, FairnessNotion::EF), NotApplicable);
  auto inst = make_binary_instance(3, 1, {{0, 1}, {1, 2}});
  auto wrong = nice_decompose_forest(make_binary_instance(3, 1, {{0, 1}}).graph);
  EXPECT_THROW(TreewidthDp(inst, FairnessNotion::EF, inst.sizes, wrong), InvalidInput);
  auto cycle = make_binary_instance(3, 1, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_THROW(dp_solve(cycle, FairnessNotion::EF), NotApplicable);
}

TEST(TreewidthDp, SignatureCapRaisesResourceLimit) {
  std::mt19937_64 rng(67);
  auto inst = make_binary_instance(9, 3, random_forest_edges(rng, 9));
  DpOptions options;
  options.signature_cap = 3;
  EXPECT_THROW(dp_solve(inst, FairnessNotion::MMS, options), ResourceLimit);
}

TEST(TreewidthDp, JoinSplitsSatisfyLinearRelations) {
  // Center 0 with two branches 0-1-3 and 0-2-4 meets at a join over bag {0}.
  auto inst = make_binary_instance(5, 2, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  int probes = 0;
  DpOptions options;
  options.on_join = [&](const DpJoin& j) {
    ++probes;
    EXPECT_EQ(j.left.P, j.right.P);
    EXPECT_EQ(j.result.P, j.left.P);
    for (std::size_t q = 0; q < j.result.f.size(); ++q) {
      EXPECT_EQ(j.result.c[q], j.left.c[q] + j.right.c[q]);
      EXPECT_EQ(j.result.f[q], j.left.f[q] - j.right.c[q]);
      EXPECT_EQ(j.result.f[q], j.right.f[q] - j.left.c[q]);
      EXPECT_GE(j.result.f[q], 0);
    }
    for (std::size_t i = 0; i < j.result.s.size(); ++i) EXPECT_EQ(j.result.s[i], j.left.s[i] + j.right.s[i]);
  };
  for (FairnessNotion notion : kAllNotions) dp_solve(inst, notion, options);
  EXPECT_GT(probes, 0);
}

TEST(TreewidthDpProperty, MatchesOracleOnTrees) {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 150; ++iter) {
    int n = 2 + static_cast<int>(rng() % 8);
    int k = 2 + static_cast<int>(rng() % 2);
    if (k > n) k = n;
    auto inst = make_binary_instance(n, k, random_forest_edges(rng, n, 1 + iter % 3));
    expect_matches_oracle(inst, nice_decompose_forest(inst.graph), inst.sizes);
  }
}

TEST(TreewidthDpProperty, MatchesOracleUnderUnbalancedSizes) {
  std::mt19937_64 rng(73);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 4 + static_cast<int>(rng() % 5);
    int first = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 2));
    SizeVector sv({first, n - first - 1, 1});
    auto inst = make_binary_instance(n, 3, random_forest_edges(rng, n));
    expect_matches_oracle(inst, nice_decompose_forest(inst.graph), sv);
  }
}

TEST(TreewidthDpProperty, MatchesOracleWithSuppliedDecompositions) {
  // Cycle C6 with bags {0, i, i+1}.
  auto cycle = make_binary_instance(6, 2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  std::vector<std::vector<AgentId>> bags;
  for (AgentId i = 1; i + 1 < 6; ++i) bags.push_back({0, i, i + 1});
  auto td = nice_from_path(bags);
  ASSERT_EQ(td.verify(cycle.graph), std::nullopt);
  expect_matches_oracle(cycle, td, cycle.sizes);

  std::mt19937_64 rng(79);
  for (int iter = 0; iter < 40; ++iter) {
    int n = 3 + static_cast<int>(rng() % 5);
    auto [inst, banded] = banded_instance(rng, n, 2 + iter % 2, 2);
    ASSERT_EQ(banded.verify(inst.graph), std::nullopt);
    expect_matches_oracle(inst, banded, inst.sizes);
  }
}
