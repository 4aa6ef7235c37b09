#include <gtest/gtest.h>

#include <random>

#include "fairpart/forge.hpp"
#include "fairpart/solve.hpp"
#include "support.hpp"

using namespace fairpart;

namespace {

Instance cycle(int n, int k) {
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId a = 0; a < n; ++a) edges.emplace_back(a, (a + 1) % n);
  return make_binary_instance(n, k, edges);
}

/// One large part and k-1 singletons.
SizeVector skewed(int n, int k) {
  std::vector<int> sizes(static_cast<std::size_t>(k), 1);
  sizes[0] = n - (k - 1);
  return SizeVector(sizes);
}

}  // namespace

TEST(Method, ParseRoundTrip) {
  for (Method m : {Method::Auto, Method::Special, Method::Forest, Method::Twdp, Method::Vc, Method::Oracle}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("ilp"), std::nullopt);
}

TEST(AutoDispatch, PicksTheCheapestApplicableMethod) {
  auto star = make_binary_instance(4, 4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(solve(star, FairnessNotion::MMS).source, "special:parts-exceed-degree");

  auto path = make_binary_instance(6, 3, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  EXPECT_EQ(solve(path, FairnessNotion::EF).source, "special:path");

  auto big_star = gen_mms_not_prop(6).instance;
  auto vc1 = solve(with_sizes(big_star, SizeVector::balanced(7, 2)), FairnessNotion::EF1);
  EXPECT_EQ(vc1.source, "special:vc1");

  std::mt19937_64 rng(5);
  auto forest = fairpart::testing::weighted_from_edges(rng, 9, 3, fairpart::testing::random_forest_edges(rng, 9), 5);
  EXPECT_EQ(solve(forest, FairnessNotion::EFX).method, Method::Forest);

  auto tree = make_binary_instance(7, 2, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
  EXPECT_EQ(solve(tree, FairnessNotion::EF).method, Method::Twdp);

  auto c6 = cycle(6, 2);
  EXPECT_EQ(solve(c6, FairnessNotion::EF).method, Method::Vc);

  auto weighted = fairpart::testing::random_instance(rng, 7, 4, 0.6, 2);
  EXPECT_EQ(solve(weighted, FairnessNotion::EF).method, Method::Oracle);
}

TEST(AutoDispatch, ResourceCapWhenNothingElseApplies) {
  std::mt19937_64 rng(9);
  auto inst = fairpart::testing::random_instance(rng, 14, 3, 0.7, 2);
  EXPECT_THROW(solve(inst, FairnessNotion::EF), ResourceLimit);
  SolveOptions wide;
  wide.limit = 3;
  EXPECT_THROW(solve(cycle(5, 2), FairnessNotion::PROP, Method::Oracle, wide), ResourceLimit);
}

TEST(ExplicitMethod, RefusesOutsideItsClass) {
  auto c5 = cycle(5, 2);
  EXPECT_THROW(solve(c5, FairnessNotion::EFX, Method::Forest), NotApplicable);
  auto path = make_binary_instance(3, 2, {{0, 1}, {1, 2}});
  EXPECT_THROW(solve(path, FairnessNotion::EF, Method::Forest), NotApplicable);
  std::mt19937_64 rng(3);
  auto weighted = fairpart::testing::weighted_from_edges(rng, 4, 2, {{0, 1}, {1, 2}}, 5);
  EXPECT_THROW(solve(weighted, FairnessNotion::EF, Method::Twdp), NotApplicable);
  EXPECT_THROW(solve(weighted, FairnessNotion::EF, Method::Vc), NotApplicable);
  EXPECT_THROW(solve(c5, FairnessNotion::EF, Method::Twdp), NotApplicable);
  EXPECT_THROW(solve(c5, FairnessNotion::EF, Method::Special), NotApplicable);
}

TEST(AuditShares, AgreeWithExactShares) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 80; ++iter) {
    const int n = 2 + static_cast<int>(rng() % 8);
    auto inst = fairpart::testing::random_instance(rng, n, iter % 2 ? 1 : 6, 0.5);
    auto fast = audit_shares(inst, inst.sizes, true);
    auto exact = compute_shares(inst, inst.sizes, true);
    EXPECT_EQ(*fast.mms, *exact.mms) << serialize_instance(inst);
  }
  std::vector<std::pair<AgentId, AgentId>> hub;
  for (AgentId leaf = 1; leaf < 20; ++leaf) hub.emplace_back(0, leaf);
  auto weighted = fairpart::testing::weighted_from_edges(rng, 20, 2, hub, 3);
  EXPECT_THROW(audit_shares(weighted, weighted.sizes, true), ResourceLimit);
  EXPECT_NO_THROW(audit_shares(weighted, weighted.sizes, false));
}

TEST(AutoDispatchProperty, AgreesWithOracle) {
  std::mt19937_64 rng(17);
  const RandomFamily families[] = {RandomFamily::Tree, RandomFamily::Forest, RandomFamily::Path,
                                   RandomFamily::Bipartite, RandomFamily::Cover, RandomFamily::General};
  for (int iter = 0; iter < 400; ++iter) {
    const int n = 2 + static_cast<int>(rng() % 8);
    const int k = 1 + static_cast<int>(rng() % std::min(3, n));
    const RandomFamily family = families[iter % 6];
    auto inst = gen_random(n, k, family, iter % 3 == 0 ? 4 : 1, rng());
    if (iter % 4 == 3 && k >= 2 && n >= 4) inst = with_sizes(inst, skewed(n, k));
    for (FairnessNotion notion : kAllNotions) {
      SolveOutcome automatic, oracle;
      try {
        automatic = solve(inst, notion);
      } catch (const ResourceLimit&) {
        continue;
      }
      oracle = solve(inst, notion, Method::Oracle);
      EXPECT_EQ(automatic.partition.has_value(), oracle.partition.has_value())
          << to_string(notion) << " via " << automatic.source << "\n" << serialize_instance(inst);
    }
  }
}
