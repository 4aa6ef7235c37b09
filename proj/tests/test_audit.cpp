#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fairpart/oracle.hpp"
#include "support.hpp"

using namespace fairpart;
using fairpart::testing::random_instance;

namespace {

Instance path3() { return make_binary_instance(3, 2, {{0, 1}, {1, 2}}); }

Instance prop_not_ef_base() {
  return make_binary_instance(7, 3, {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}});
}

ShareTable prop_only(int k) { return ShareTable{k, std::nullopt}; }

}  // namespace

TEST(Audit, EnviousOnPathThree) {
  auto inst = path3();
  Partition p = Partition::from_parts({{1}, {0, 2}}, 3);
  auto ef = envious(inst.utilities, p, 1, 0, FairnessNotion::EF);
  ASSERT_TRUE(ef.has_value());
  EXPECT_EQ(ef->own, 0);
  EXPECT_EQ(ef->target, 1);
  EXPECT_FALSE(envious(inst.utilities, p, 1, 0, FairnessNotion::EFX0).has_value());
}

TEST(Audit, BasePartitionIsPropButNotEf) {
  auto inst = prop_not_ef_base();
  Partition p = Partition::from_parts({{0, 2}, {1, 3, 4}, {5, 6}}, 7);
  EXPECT_TRUE(check_partition(inst, p, FairnessNotion::PROP, prop_only(3)).passed());
  auto ef = check_partition(inst, p, FairnessNotion::EF, prop_only(3));
  ASSERT_FALSE(ef.passed());
  const auto* fail = ef.first_failure();
  ASSERT_NE(fail, nullptr);
  EXPECT_EQ(fail->agent, 0);
  const auto& w = std::get<EnvyWitness>(fail->witness);
  EXPECT_EQ(w.envied, 1);
  EXPECT_EQ(w.own, 1);
  EXPECT_EQ(w.target, 2);
  EXPECT_EQ(serialize_report(ef).substr(0, 50), "agent 0 EF fail envies 1 own 1 target 2 blocking -");
}

TEST(Audit, EdgelessSingletonsPassEverything) {
  auto inst = make_binary_instance(4, 4, {});
  Partition p({0, 1, 2, 3}, 4);
  ShareTable shares{4, std::vector<Weight>(4, 0)};
  for (auto notion : kAllNotions) EXPECT_TRUE(check_partition(inst, p, notion, shares).passed());
}

TEST(Audit, PropShares) {
  auto inst = path3();
  Partition p = Partition::from_parts({{0, 1}, {2}}, 3);
  auto report = check_partition(inst, p, FairnessNotion::PROP, prop_only(2));
  const auto& middle = std::get<ShareWitness>(report.verdicts[1].witness);
  EXPECT_EQ(middle.numerator, 2);
  EXPECT_EQ(middle.denominator, 2);
  EXPECT_TRUE(report.verdicts[1].pass);
  EXPECT_FALSE(report.verdicts[2].pass);  // 2 alone: 0 < 1/2

  auto kn = make_binary_instance(4, 2, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(kn.utilities.total(0), 3);  // share (2k-1)/k = 3/2
}

TEST(Audit, BinaryMmsClosedForm) {
  auto star = make_binary_instance(6, 2, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  EXPECT_EQ(mms_share_binary(star, 0), 2);
  auto small = make_binary_instance(5, 3, {{0, 1}, {0, 2}});
  EXPECT_EQ(mms_share_binary(small, 0), 0);
  auto star4 = make_binary_instance(5, 2, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_EQ(mms_share_binary(star4, 0), 2);
  EXPECT_EQ(mms_share_exact(star4, 0, star4.sizes), 2);
  EXPECT_THROW(mms_share_binary(with_sizes(star4, SizeVector({4, 1})), 0), NotApplicable);
}

// Fast aggregated audit against the pairwise definitions.
TEST(AuditProperty, FastAuditMatchesPairwiseDefinitions) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    auto inst = random_instance(rng, 2 + static_cast<int>(rng() % 8), iter % 3 == 0 ? 1 : 4, 0.5);
    auto sv = inst.sizes;
    std::vector<PartIndex> part_of;
    for (int i = 0; i < sv.k(); ++i) part_of.insert(part_of.end(), static_cast<std::size_t>(sv.at(i)), i);
    std::shuffle(part_of.begin(), part_of.end(), rng);
    Partition p(part_of, sv.k());
    for (auto notion : {FairnessNotion::EF, FairnessNotion::EFX0, FairnessNotion::EFX, FairnessNotion::EF1}) {
      auto report = check_partition(inst, p, notion, prop_only(sv.k()));
      for (AgentId a = 0; a < inst.n(); ++a) {
        std::optional<AgentId> first;
        for (AgentId b = 0; b < inst.n() && !first; ++b) {
          if (p.part_of(a) == p.part_of(b)) continue;
          if (envious(inst.utilities, p, a, b, notion)) first = b;
        }
        const auto& v = report.verdicts[a];
        ASSERT_EQ(v.pass, !first.has_value()) << to_string(notion) << " agent " << a << " iter " << iter;
        if (first) {
          const auto& w = std::get<EnvyWitness>(v.witness);
          EXPECT_EQ(w.envied, *first);
          // Witness replays: the envied part still beats a's part after each blocking removal.
          for (AgentId c : w.blocking) {
            EXPECT_LT(w.own, w.target - inst.utilities.weight(a, c));
          }
        }
      }
    }
  }
}

TEST(AuditProperty, ImplicationChainsAndBinaryCollapse) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 150; ++iter) {
    bool binary = iter % 2 == 0;
    int n = 3 + static_cast<int>(rng() % 5);
    auto inst = random_instance(rng, n, binary ? 1 : 5, 0.5, 2 + static_cast<int>(rng() % 2));
    auto shares = compute_shares(inst, inst.sizes, true);
    enumerate_partitions(n, inst.sizes, [&](const Partition& p) {
      std::map<FairnessNotion, bool> pass;
      for (auto notion : kAllNotions) pass[notion] = is_fair(inst, p, notion, shares);
      using F = FairnessNotion;
      EXPECT_TRUE(!pass[F::EF] || pass[F::EFX0]);
      EXPECT_TRUE(!pass[F::EFX0] || pass[F::EFX]);
      EXPECT_TRUE(!pass[F::EFX] || pass[F::EF1]);
      EXPECT_TRUE(!pass[F::PROP] || pass[F::MMS]);
      if (inst.k == 2) {
        EXPECT_TRUE(!pass[F::PROP] || pass[F::EF]);
        EXPECT_TRUE(!pass[F::MMS] || pass[F::EF1]);
      }
      if (binary) {
        for (AgentId a = 0; a < n; ++a) {
          EXPECT_EQ(audit_agent(inst, p, a, F::EFX, shares).pass, audit_agent(inst, p, a, F::EF1, shares).pass);
        }
      }
      return true;
    });
  }
}

TEST(AuditProperty, BinaryCountPredicateMatchesDefinitions) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 3 + static_cast<int>(rng() % 7);
    auto inst = random_instance(rng, n, 1, 0.45, 2 + static_cast<int>(rng() % 2));
    std::vector<PartIndex> part_of;
    for (int i = 0; i < inst.k; ++i) part_of.insert(part_of.end(), static_cast<std::size_t>(inst.sizes.at(i)), i);
    std::shuffle(part_of.begin(), part_of.end(), rng);
    Partition p(part_of, inst.k);
    for (auto notion : {FairnessNotion::EF, FairnessNotion::EFX0, FairnessNotion::EFX, FairnessNotion::EF1}) {
      for (AgentId a = 0; a < n; ++a) {
        std::vector<int> count(static_cast<std::size_t>(inst.k), 0);
        for (AgentId b : inst.graph.friends(a)) ++count[p.part_of(b)];
        bool ok = true;
        for (PartIndex j = 0; j < inst.k; ++j) {
          if (j == p.part_of(a)) continue;
          ok = ok && binary_envy_ok(notion, count[p.part_of(a)], count[j], p.size(j));
        }
        EXPECT_EQ(ok, audit_agent(inst, p, a, notion, prop_only(inst.k)).pass);
      }
    }
  }
}

TEST(AuditProperty, VerdictsInvariantUnderRelabeling) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    int n = 3 + static_cast<int>(rng() % 6);
    auto inst = random_instance(rng, n, 4, 0.5, 2 + static_cast<int>(rng() % 2));
    auto shares = compute_shares(inst, inst.sizes, true);
    std::vector<PartIndex> part_of;
    for (int i = 0; i < inst.k; ++i) part_of.insert(part_of.end(), static_cast<std::size_t>(inst.sizes.at(i)), i);
    std::shuffle(part_of.begin(), part_of.end(), rng);
    Partition p(part_of, inst.k);

    std::vector<PartIndex> relabel(static_cast<std::size_t>(inst.k));
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    std::vector<PartIndex> moved(part_of.size());
    for (std::size_t a = 0; a < part_of.size(); ++a) moved[a] = relabel[part_of[a]];
    Partition q(moved, inst.k);

    std::vector<AgentId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::map<std::pair<AgentId, AgentId>, Weight> w;
    for (AgentId a = 0; a < n; ++a) {
      for (AgentId b : inst.graph.friends(a)) w[{perm[a], perm[b]}] = inst.utilities.weight(a, b);
    }
    auto renamed = make_instance(n, inst.k, w);
    std::vector<PartIndex> renamed_parts(static_cast<std::size_t>(n));
    for (AgentId a = 0; a < n; ++a) renamed_parts[perm[a]] = part_of[a];
    Partition r(renamed_parts, inst.k);
    auto renamed_shares = compute_shares(renamed, renamed.sizes, true);

    for (auto notion : kAllNotions) {
      auto base = check_partition(inst, p, notion, shares);
      auto parts = check_partition(inst, q, notion, shares);
      auto agents = check_partition(renamed, r, notion, renamed_shares);
      for (AgentId a = 0; a < n; ++a) {
        EXPECT_EQ(base.verdicts[a].pass, parts.verdicts[a].pass);
        EXPECT_EQ(base.verdicts[a].pass, agents.verdicts[perm[a]].pass);
      }
    }
  }
}
