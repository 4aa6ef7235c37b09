#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fairpart/oracle.hpp"
#include "support.hpp"

using namespace fairpart;
using fairpart::testing::random_instance;

namespace {

/// max-min over whole-agent partitions; independent of the friend-distribution search.
Weight brute_mms(const Instance& inst, AgentId a, const SizeVector& sv) {
  Weight best = 0;
  enumerate_partitions(inst.n(), sv, [&](const Partition& p) {
    Weight low = std::numeric_limits<Weight>::max();
    for (PartIndex i = 0; i < p.k(); ++i) low = std::min(low, inst.utilities.value(a, p.members(i)));
    best = std::max(best, low);
    return true;
  });
  return best;
}

std::string canonical(const Partition& p) {
  std::vector<std::vector<AgentId>> parts;
  for (PartIndex i = 0; i < p.k(); ++i) parts.push_back(p.members(i));
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (const auto& part : parts) {
    for (AgentId a : part) s += std::to_string(a) + ",";
    s += "|";
  }
  return s;
}

}  // namespace

TEST(Oracle, PartitionCounts) {
  auto count = [](int n, std::vector<int> sizes) {
    return enumerate_partitions(n, SizeVector(sizes), [](const Partition&) { return true; });
  };
  EXPECT_EQ(count(3, {2, 1}), 3);
  EXPECT_EQ(count(4, {2, 2}), 3);
  EXPECT_EQ(count(5, {3, 2}), 10);
  EXPECT_EQ(count(6, {2, 2, 2}), 15);
  EXPECT_EQ(count(7, {3, 2, 2}), 105);
  EXPECT_EQ(count(12, {6, 6}), 462);
}

TEST(Oracle, EnumerationIsExactlyOnceAndMatchesFormula) {
  for (int n = 1; n <= 9; ++n) {
    for (int k = 1; k <= n; ++k) {
      auto sv = SizeVector::balanced(n, k);
      std::set<std::string> seen;
      long long visited = enumerate_partitions(n, sv, [&](const Partition& p) {
        EXPECT_EQ(validate_partition(p, n, sv), std::nullopt);
        EXPECT_TRUE(seen.insert(canonical(p)).second);
        return true;
      });
      EXPECT_EQ(visited, count_partitions(n, sv)) << n << " " << k;
    }
  }
  auto skew = SizeVector({4, 2, 2, 1});
  EXPECT_EQ(enumerate_partitions(9, skew, [](const Partition&) { return true; }), count_partitions(9, skew));
}

TEST(Oracle, LimitIsEnforced) {
  auto inst = make_binary_instance(13, 2, {});
  EXPECT_THROW(exists_fair(inst, FairnessNotion::EF), ResourceLimit);
  EXPECT_THROW(exists_fair(inst, FairnessNotion::EF, inst.sizes, 10), ResourceLimit);
  EXPECT_NO_THROW(exists_fair(inst, FairnessNotion::EF, inst.sizes, 13));
}

TEST(Oracle, PathThreeCounterexamples) {
  auto inst = make_binary_instance(3, 2, {{0, 1}, {1, 2}});
  EXPECT_FALSE(exists_fair(inst, FairnessNotion::EF).partition);
  EXPECT_FALSE(exists_fair(inst, FairnessNotion::PROP).partition);
  EXPECT_TRUE(exists_fair(inst, FairnessNotion::EFX0).partition);
}

TEST(Oracle, WeightedStarShare) {
  std::map<std::pair<AgentId, AgentId>, Weight> w;
  for (int i = 1; i <= 4; ++i) {
    w[{0, i}] = i;
    w[{i, 0}] = i;
  }
  auto star = make_instance(5, 2, w);
  EXPECT_EQ(mms_share_exact(star, 0, star.sizes), 5);
  EXPECT_EQ(mms_share_exact(star, 1, star.sizes), 0);  // fewer friends than parts
}

TEST(Oracle, ExactMmsMatchesWholePartitionBruteForce) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(rng() % 7);
    auto inst = random_instance(rng, n, iter % 2 ? 1 : 6, 0.55);
    std::vector<int> sizes;
    if (iter % 3 == 0 && n >= 3) {
      int first = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
      sizes = {first, n - first};
    } else {
      sizes = inst.sizes.values();
    }
    SizeVector sv(sizes);
    for (AgentId a = 0; a < n; ++a) EXPECT_EQ(mms_share_exact(inst, a, sv), brute_mms(inst, a, sv));
  }
}

TEST(Oracle, BinaryClosedFormMatchesExact) {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(rng() % 8);
    auto inst = random_instance(rng, n, 1, 0.5);
    for (AgentId a = 0; a < n; ++a) {
      EXPECT_EQ(mms_share_binary(inst, a), mms_share_exact(inst, a, inst.sizes));
      EXPECT_EQ(binary_mms_share(inst.graph.degree(a), inst.sizes), mms_share_exact(inst, a, inst.sizes));
    }
    if (n >= 4) {
      SizeVector skew({n - 2, 1, 1});
      for (AgentId a = 0; a < n; ++a) {
        EXPECT_EQ(binary_mms_share(inst.graph.degree(a), skew), mms_share_exact(inst, a, skew));
      }
    }
  }
}

TEST(Oracle, FirstCanonicalPartitionIsDeterministic) {
  auto inst = make_binary_instance(4, 2, {{0, 1}, {2, 3}});
  auto r = exists_fair(inst, FairnessNotion::EF);
  ASSERT_TRUE(r.partition);
  EXPECT_EQ(r.partition->members(0), (std::vector<AgentId>{0, 1}));
  EXPECT_EQ(r.enumerated, 1);
}

TEST(Oracle, TaxonomyScanAgreesWithSingleNotionCalls) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 40; ++iter) {
    auto inst = random_instance(rng, 3 + static_cast<int>(rng() % 5), 3, 0.5, 2);
    auto rows = taxonomy_scan(inst, inst.sizes);
    for (const auto& row : rows) {
      EXPECT_EQ(row.witness.has_value(), exists_fair(inst, row.notion).partition.has_value());
    }
  }
}
