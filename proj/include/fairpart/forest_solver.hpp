#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "fairpart/graph.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/utilities.hpp"

namespace fairpart {

/// Largest candidate count for exhaustive subset selection under a non-additive valuation.
inline constexpr int kMaxExhaustiveChildren = 20;

/// Subset of `candidates` with exactly `size` members maximising value(a, S ∪ {anchor}).
/// Additive valuations take the top weights (ties to the smaller id); other valuations are
/// searched exhaustively. Result is sorted ascending.
template <SetValuation V>
std::vector<AgentId> select_best_subset(const V& valuation, AgentId a, std::span<const AgentId> candidates,
                                        int size, std::optional<AgentId> anchor = std::nullopt) {
  if (size < 0 || size > static_cast<int>(candidates.size())) throw InvalidInput("subset size out of range");
  std::vector<AgentId> chosen;
  if (size == 0) return chosen;
  if constexpr (AdditiveValuation<V>) {
    std::vector<std::pair<Weight, AgentId>> ranked;
    ranked.reserve(candidates.size());
    for (AgentId c : candidates) ranked.emplace_back(valuation.weight(a, c), c);
    auto better = [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    };
    std::nth_element(ranked.begin(), ranked.begin() + (size - 1), ranked.end(), better);
    for (int i = 0; i < size; ++i) chosen.push_back(ranked[i].second);
  } else {
    const int m = static_cast<int>(candidates.size());
    if (m > kMaxExhaustiveChildren) {
      throw ResourceLimit("exhaustive subset selection over " + std::to_string(m) + " candidates");
    }
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[i] = i;
    std::vector<AgentId> set;
    std::optional<Weight> best;
    while (true) {
      set.clear();
      for (int i : idx) set.push_back(candidates[i]);
      if (anchor) set.push_back(*anchor);
      Weight v = valuation.value(a, set);
      if (!best || v > *best) {
        best = v;
        chosen.assign(set.begin(), set.begin() + size);
      }
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == m - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

struct ForestStats {
  int max_budget_spread = 0;  ///< Largest max(b)-min(b) seen after any step.
  bool budget_exhausted = false;
  int moves = 0;  ///< Agents that joined their parent's part.
  std::vector<AgentId> order;
};

struct ForestSolution {
  Partition partition;
  ForestStats stats;
};

/// Partition of a forest that is EFX and MMS for every monotone valuation; part i receives
/// exactly sv.at(i) agents. Roots are the smallest agent of each tree, processed in BFS order.
template <SetValuation V>
ForestSolution solve_forest(const FriendshipGraph& g, const V& valuation, const SizeVector& sv) {
  if (sv.total() != g.n()) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  const RootedForest forest = root_forest(g);
  const int k = sv.k();
  std::vector<int> budget = sv.values();
  int pointer = 0;
  ForestStats stats;
  auto spread = [&] {
    auto [lo, hi] = std::minmax_element(budget.begin(), budget.end());
    stats.max_budget_spread = std::max(stats.max_budget_spread, *hi - *lo);
  };
  // Largest remaining budget, scanning cyclically from the pointer.
  auto take = [&]() {
    int best = pointer;
    for (int t = 1; t < k; ++t) {
      int i = (pointer + t) % k;
      if (budget[i] > budget[best]) best = i;
    }
    --budget[best];
    pointer = (best + 1) % k;
    return best;
  };
  auto value = [&](AgentId a, const std::vector<AgentId>& set) -> Weight {
    if constexpr (AdditiveValuation<V>) {
      Weight sum = 0;
      for (AgentId c : set) sum += valuation.weight(a, c);
      return sum;
    } else {
      return valuation.value(a, set);
    }
  };

  std::vector<PartIndex> part(static_cast<std::size_t>(g.n()), -1);
  std::vector<AgentId> children;
  std::vector<int> quota(static_cast<std::size_t>(k));
  stats.order.reserve(static_cast<std::size_t>(g.n()));

  for (AgentId a : forest.order) {
    const AgentId p = forest.parent[a];
    if (p == -1) part[a] = take();
    stats.order.push_back(a);
    children.clear();
    for (AgentId c : g.friends(a)) {
      if (c != p) children.push_back(c);
    }
    if (children.empty()) {
      spread();
      continue;
    }
    std::fill(quota.begin(), quota.end(), 0);
    for (std::size_t t = 0; t < children.size(); ++t) ++quota[take()];

    const PartIndex j = part[a];
    std::vector<AgentId> keep = select_best_subset(valuation, a, children, quota[j]);
    PartIndex target = j;
    std::vector<AgentId> chosen = keep;
    if (p != -1 && part[p] != j && quota[part[p]] >= 1) {
      const PartIndex i = part[p];
      std::vector<AgentId> join = select_best_subset(valuation, a, children, quota[i] - 1, p);
      std::vector<AgentId> with_parent = join;
      with_parent.push_back(p);
      if (value(a, with_parent) > value(a, keep)) {
        part[a] = i;
        target = i;
        chosen = std::move(join);
        // a leaves j: j takes one extra child, i one fewer beyond the chosen set.
        ++quota[j];
        --quota[i];
        ++stats.moves;
      }
    }
    quota[target] -= static_cast<int>(chosen.size());
    for (AgentId c : chosen) part[c] = target;
    // Remaining children in ascending id fill the quotas in part order.
    PartIndex q = 0;
    for (AgentId c : children) {
      if (part[c] != -1) continue;
      while (quota[q] == 0) ++q;
      part[c] = q;
      --quota[q];
    }
    spread();
  }
  stats.budget_exhausted = std::all_of(budget.begin(), budget.end(), [](int b) { return b == 0; });
  return {Partition(std::move(part), k), std::move(stats)};
}

}  // namespace fairpart
