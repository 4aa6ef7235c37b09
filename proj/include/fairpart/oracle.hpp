#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fairpart/audit.hpp"

namespace fairpart {

inline constexpr int kDefaultOracleLimit = 12;

/// Agent-count cap for exhaustive routines; FAIRPART_ORACLE_LIMIT overrides the default.
inline int oracle_limit() {
  if (const char* env = std::getenv("FAIRPART_ORACLE_LIMIT")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultOracleLimit;
}

inline void require_within_limit(int n, int limit, const char* what) {
  if (n > limit) {
    throw ResourceLimit(std::string(what) + ": " + std::to_string(n) + " agents exceed the exhaustive limit of " +
                        std::to_string(limit));
  }
}

/// Visits every partition of 0..n-1 matching `sv` exactly once. Parts are labelled by
/// position in `sv`; parts of equal size are ordered by smallest member. `visit` returns
/// false to stop. Returns the number of partitions visited.
inline long long enumerate_partitions(int n, const SizeVector& sv,
                                      const std::function<bool(const Partition&)>& visit) {
  if (sv.total() != n) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  const int k = sv.k();
  std::vector<PartIndex> part_of(static_cast<std::size_t>(n), -1);
  std::vector<AgentId> first(static_cast<std::size_t>(k), -1);
  long long visited = 0;
  bool stop = false;

  // Adds members to part t from agents >= from; `left` slots remain.
  std::function<void(int, AgentId, int)> fill = [&](int t, AgentId from, int left) {
    if (stop) return;
    if (left == 0) {
      if (t + 1 == k) {
        ++visited;
        if (!visit(Partition(part_of, k))) stop = true;
        return;
      }
      const int u = t + 1;
      const AgentId start = sv.at(u) == sv.at(t) ? first[t] + 1 : 0;
      for (AgentId a = start; a < n && !stop; ++a) {
        if (part_of[a] != -1) continue;
        part_of[a] = u;
        first[u] = a;
        fill(u, a + 1, sv.at(u) - 1);
        part_of[a] = -1;
      }
      return;
    }
    for (AgentId a = from; a < n && !stop; ++a) {
      if (part_of[a] != -1) continue;
      part_of[a] = t;
      fill(t, a + 1, left - 1);
      part_of[a] = -1;
    }
  };

  for (AgentId a = 0; a < n && !stop; ++a) {
    part_of[a] = 0;
    first[0] = a;
    fill(0, a + 1, sv.at(0) - 1);
    part_of[a] = -1;
  }
  return visited;
}

/// n! / (prod s_i!) / (prod over equal sizes of multiplicity!).
inline long long count_partitions(int n, const SizeVector& sv) {
  // Multiply binomials part by part to stay in range.
  long long total = 1;
  int left = n;
  auto binom = [](int a, int b) {
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  for (int i = 0; i < sv.k(); ++i) {
    total *= binom(left, sv.at(i));
    left -= sv.at(i);
  }
  for (int i = 0; i < sv.k();) {
    int j = i;
    while (j < sv.k() && sv.at(j) == sv.at(i)) ++j;
    for (int m = 2; m <= j - i; ++m) total /= m;
    i = j;
  }
  return total;
}

/// max over partitions matching sv of min_i u_a(part_i). Only the friends' placement matters;
/// non-friends fill the remaining slots.
inline Weight mms_share_exact(const Instance& inst, AgentId a, const SizeVector& sv, int limit = oracle_limit()) {
  require_within_limit(inst.n(), limit, "exact MMS share");
  if (sv.total() != inst.n()) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  const int k = sv.k();
  std::vector<Weight> w(inst.utilities.weights(a).begin(), inst.utilities.weights(a).end());
  std::sort(w.begin(), w.end(), std::greater<>());
  if (k == 1) return std::accumulate(w.begin(), w.end(), Weight{0});
  std::vector<Weight> suffix(w.size() + 1, 0);
  for (std::size_t i = w.size(); i-- > 0;) suffix[i] = suffix[i + 1] + w[i];

  Weight best = 0;
  std::vector<int> cap(static_cast<std::size_t>(k));
  std::vector<int> count(static_cast<std::size_t>(k));
  std::vector<Weight> load(static_cast<std::size_t>(k));

  std::function<void(std::size_t, Weight)> place = [&](std::size_t i, Weight placed) {
    Weight low = *std::min_element(load.begin(), load.end());
    if (i == w.size()) {
      best = std::max(best, low);
      return;
    }
    if (low + suffix[i] <= best) return;
    if ((placed + suffix[i]) / k <= best) return;
    for (int j = 0; j < k; ++j) {
      if (count[j] >= cap[j]) continue;
      bool duplicate = false;
      for (int q = 0; q < j && !duplicate; ++q) {
        duplicate = cap[q] == cap[j] && count[q] == count[j] && load[q] == load[j];
      }
      if (duplicate) continue;
      ++count[j];
      load[j] += w[i];
      place(i + 1, placed + w[i]);
      load[j] -= w[i];
      --count[j];
    }
  };

  for (int p = 0; p < k; ++p) {
    if (p > 0 && sv.at(p) == sv.at(p - 1)) continue;
    for (int j = 0; j < k; ++j) {
      cap[j] = sv.at(j) - (j == p ? 1 : 0);
      count[j] = 0;
      load[j] = 0;
    }
    place(0, 0);
  }
  return best;
}

/// Shares for auditing partitions matching `sv`, with exact MMS values when requested.
inline ShareTable compute_shares(const Instance& inst, const SizeVector& sv, bool with_mms,
                                 int limit = oracle_limit()) {
  ShareTable t;
  t.k = sv.k();
  if (with_mms) {
    std::vector<Weight> mms(static_cast<std::size_t>(inst.n()));
    for (AgentId a = 0; a < inst.n(); ++a) mms[a] = mms_share_exact(inst, a, sv, limit);
    t.mms = std::move(mms);
  }
  return t;
}

struct OracleResult {
  std::optional<Partition> partition;  ///< First canonical fair partition.
  long long enumerated = 0;
};

inline OracleResult exists_fair(const Instance& inst, FairnessNotion notion, const SizeVector& sv,
                                int limit = oracle_limit()) {
  require_within_limit(inst.n(), limit, "exhaustive oracle");
  ShareTable shares = compute_shares(inst, sv, notion == FairnessNotion::MMS, limit);
  OracleResult result;
  result.enumerated = enumerate_partitions(inst.n(), sv, [&](const Partition& p) {
    if (is_fair(inst, p, notion, shares)) {
      result.partition = p;
      return false;
    }
    return true;
  });
  return result;
}

inline OracleResult exists_fair(const Instance& inst, FairnessNotion notion) {
  return exists_fair(inst, notion, inst.sizes);
}

struct TaxonomyRow {
  FairnessNotion notion;
  std::optional<Partition> witness;
};

/// Existence of all six notions from a single enumeration pass.
inline std::array<TaxonomyRow, 6> taxonomy_scan(const Instance& inst, const SizeVector& sv,
                                                int limit = oracle_limit()) {
  require_within_limit(inst.n(), limit, "taxonomy scan");
  ShareTable shares = compute_shares(inst, sv, true, limit);
  std::array<TaxonomyRow, 6> rows;
  for (std::size_t i = 0; i < kAllNotions.size(); ++i) rows[i].notion = kAllNotions[i];
  int missing = 6;
  enumerate_partitions(inst.n(), sv, [&](const Partition& p) {
    for (auto& row : rows) {
      if (!row.witness && is_fair(inst, p, row.notion, shares)) {
        row.witness = p;
        --missing;
      }
    }
    return missing > 0;
  });
  return rows;
}

}  // namespace fairpart
