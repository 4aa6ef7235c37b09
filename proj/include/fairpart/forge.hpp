#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairpart/instance.hpp"

namespace fairpart {

/// One checkable claim about a forged instance: existence of a fair partition, or the verdict
/// of the bundled partition.
struct Expectation {
  FairnessNotion notion = FairnessNotion::EF;
  bool about_partition = false;
  bool positive = true;  ///< found / pass
  bool operator==(const Expectation&) const = default;
};

struct Forged {
  Instance instance;
  std::optional<Partition> partition;
  std::vector<Expectation> expectations;
  std::optional<Weight> sigma;  ///< Share threshold for the equitable star.
  std::vector<std::string> notes;
};

inline void write_sidecar(std::ostream& out, const Forged& f) {
  for (const auto& note : f.notes) out << "# " << note << "\n";
  if (f.sigma) out << "sigma " << *f.sigma << "\n";
  for (const auto& e : f.expectations) {
    if (e.about_partition) {
      out << "expect-partition " << to_string(e.notion) << (e.positive ? " pass" : " fail") << "\n";
    } else {
      out << "expect " << to_string(e.notion) << (e.positive ? " found" : " none") << "\n";
    }
  }
}

inline std::vector<Expectation> parse_sidecar(std::istream& in) {
  std::vector<Expectation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string head, notion, verdict;
    if (!(words >> head)) continue;
    if (head == "sigma") continue;
    if ((head != "expect" && head != "expect-partition") || !(words >> notion >> verdict)) {
      throw InvalidInput("line " + std::to_string(lineno) + ": malformed expectation");
    }
    auto parsed = parse_notion(notion);
    if (!parsed) throw InvalidInput("line " + std::to_string(lineno) + ": unknown notion " + notion);
    Expectation e{*parsed, head == "expect-partition", false};
    const std::string yes = e.about_partition ? "pass" : "found";
    const std::string no = e.about_partition ? "fail" : "none";
    if (verdict != yes && verdict != no) throw InvalidInput("line " + std::to_string(lineno) + ": bad verdict " + verdict);
    e.positive = verdict == yes;
    out.push_back(e);
  }
  return out;
}

namespace detail {

using WeightMap = std::map<std::pair<AgentId, AgentId>, Weight>;

inline void mutual(WeightMap& w, AgentId a, AgentId b, Weight ab = 1, Weight ba = 1) {
  w[{a, b}] = ab;
  w[{b, a}] = ba;
}

/// Objective utilities: everyone values agent b at value[b].
inline WeightMap objective(const std::vector<std::pair<AgentId, AgentId>>& edges, const std::vector<Weight>& value) {
  WeightMap w;
  for (auto [a, b] : edges) mutual(w, a, b, value[b], value[a]);
  return w;
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput(message);
}

}  // namespace detail

/// Exact check whether items S fill B bins of capacity c exactly.
inline bool bin_packing_solvable(std::vector<int> items, int bins, int capacity) {
  if (std::accumulate(items.begin(), items.end(), 0LL) != 1LL * bins * capacity) return false;
  std::sort(items.rbegin(), items.rend());
  std::vector<int> load(static_cast<std::size_t>(bins), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == items.size()) return true;
    for (int b = 0; b < bins; ++b) {
      if (load[b] + items[i] > capacity) continue;
      if (b > 0 && load[b] == load[b - 1]) continue;  // equal loads are interchangeable
      load[b] += items[i];
      if (place(i + 1)) return true;
      load[b] -= items[i];
    }
    return false;
  };
  return place(0);
}

/// Standard agents 0..k, guards k+1..2k. No MMS partition exists; the bundled partition is EF1.
inline Forged gen_mms_nonexistence(int k) {
  detail::require(k >= 2, "mms-nonexistence needs k >= 2");
  const int n = 2 * k + 1;
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId g = k + 1; g < n; ++g) {
    for (AgentId h = g + 1; h < n; ++h) edges.emplace_back(g, h);
    for (AgentId s = 0; s <= k; ++s) edges.emplace_back(s, g);
  }
  Forged f{make_binary_instance(n, k, edges), std::nullopt, {}, std::nullopt, {}};
  // Part 0: guard k+1 with standard agents 0 and k; part j: guard k+1+j with standard agent j.
  std::vector<PartIndex> part(static_cast<std::size_t>(n));
  part[0] = 0;
  part[k] = 0;
  for (int j = 0; j < k; ++j) {
    part[k + 1 + j] = j;
    if (j > 0) part[j] = j;
  }
  f.partition = Partition(std::move(part), k);
  f.expectations = {{FairnessNotion::MMS, false, false},
                    {FairnessNotion::EF1, false, true},
                    {FairnessNotion::EF1, true, true},
                    {FairnessNotion::MMS, true, false}};
  return f;
}

/// Agents 0..6 with edges 0-2, 0-3, 0-4, 1-3, 1-4, plus k-3 separate paths on three agents.
/// The bundled partition is PROP but agent 0 envies agent 1.
inline Forged gen_prop_not_ef(int k) {
  detail::require(k >= 3, "prop-not-ef needs k >= 3");
  const int n = 7 + 3 * (k - 3);
  std::vector<std::pair<AgentId, AgentId>> edges{{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}};
  std::vector<PartIndex> part{0, 1, 0, 1, 1, 2, 2};
  for (int copy = 0; copy < k - 3; ++copy) {
    const AgentId mid = 7 + 3 * copy;
    edges.emplace_back(mid, mid + 1);
    edges.emplace_back(mid, mid + 2);
    part.insert(part.end(), 3, 3 + copy);
  }
  Forged f{make_binary_instance(n, k, edges), Partition(std::move(part), k), {}, std::nullopt, {}};
  f.expectations = {{FairnessNotion::PROP, true, true}, {FairnessNotion::EF, true, false}};
  if (k > 3) f.notes.push_back("extra three-agent paths are not attached to agent 0");
  return f;
}

/// Complete graph on 2k agents: EF exists, PROP does not.
inline Forged gen_ef_not_prop(int k) {
  detail::require(k >= 2, "ef-not-prop needs k >= 2");
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId a = 0; a < 2 * k; ++a) {
    for (AgentId b = a + 1; b < 2 * k; ++b) edges.emplace_back(a, b);
  }
  Forged f{make_binary_instance(2 * k, k, edges), std::nullopt, {}, std::nullopt, {}};
  f.expectations = {{FairnessNotion::EF, false, true}, {FairnessNotion::PROP, false, false}};
  return f;
}

/// Star with center 0 and k leaves: MMS exists, PROP does not.
inline Forged gen_mms_not_prop(int k) {
  detail::require(k >= 2, "mms-not-prop needs k >= 2");
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId leaf = 1; leaf <= k; ++leaf) edges.emplace_back(0, leaf);
  Forged f{make_binary_instance(k + 1, k, edges), std::nullopt, {}, std::nullopt, {}};
  f.expectations = {{FairnessNotion::MMS, false, true}, {FairnessNotion::PROP, false, false}};
  return f;
}

/// Weighted star (center 0) with one leaf per element, k = 2, sigma = sum / 2.
inline Forged gen_equitable_star(const std::vector<Weight>& S) {
  detail::require(!S.empty() && S.size() % 2 == 0, "equitable-star needs an even number of elements");
  detail::require(std::all_of(S.begin(), S.end(), [](Weight s) { return s > 0; }), "elements must be positive");
  const Weight total = std::accumulate(S.begin(), S.end(), Weight{0});
  detail::WeightMap w;
  for (std::size_t i = 0; i < S.size(); ++i) detail::mutual(w, 0, static_cast<AgentId>(i + 1), S[i], S[i]);
  Forged f{make_instance(static_cast<int>(S.size()) + 1, 2, w), std::nullopt, {}, total / 2, {}};
  if (total % 2 != 0) f.notes.push_back("odd sum: no equitable split exists");
  return f;
}

/// Weighted path of c*B agents, k = B. Items become consecutive runs; `prop` selects the
/// multiplicative weight scheme.
inline Forged gen_binpacking_path(const std::vector<int>& S, int B, int c, bool prop = false) {
  detail::require(B >= 2, "binpacking-path needs B >= 2");
  detail::require(c >= 4, "binpacking-path needs c >= 4");
  detail::require(!S.empty() && std::all_of(S.begin(), S.end(), [](int s) { return s >= 2; }),
                  "binpacking-path needs every item >= 2");
  detail::require(std::accumulate(S.begin(), S.end(), 0LL) == 1LL * c * B, "item sizes must sum to c*B");
  const int n = c * B;
  const Weight k = B;
  auto mul = [](Weight a, Weight b) {
    if (a > std::numeric_limits<Weight>::max() / b) throw InvalidInput("path weights overflow");
    return a * b;
  };
  std::vector<Weight> value;
  std::vector<std::size_t> start;
  for (std::size_t i = 0; i < S.size(); ++i) {
    start.push_back(value.size());
    for (int j = 1; j <= S[i]; ++j) {
      Weight v = 0;
      if (i == 0) {
        v = prop ? mul(j == 1 ? k : value.back(), j == 1 ? 1 : k) : j;
      } else if (j == 1) {
        v = value[start[i - 1] + static_cast<std::size_t>(S[i - 1]) - 2];
      } else if (j == 2) {
        v = prop ? mul(value.back(), mul(k, k)) : value.back() + 2;
      } else {
        v = prop ? mul(value.back(), k) : value.back() + 1;
      }
      value.push_back(v);
    }
  }
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
  Forged f{make_instance(n, B, detail::objective(edges, value)), std::nullopt, {}, std::nullopt, {}};
  const bool packable = bin_packing_solvable(S, B, c);
  if (prop) {
    f.expectations = {{FairnessNotion::PROP, false, packable}};
  } else {
    f.expectations = {{FairnessNotion::EF, false, packable}, {FairnessNotion::EFX0, false, packable}};
  }
  return f;
}

enum class BipartiteVariant { Efx, Ef1, Mms };

/// Set agents 0 and 1 joined to every element agent (and guards 2, 3 unless MMS), k = 2, with
/// objective utilities: elements s_i, guards 1, set agents B = sum / 2.
inline Forged gen_bipartite_vc2(const std::vector<Weight>& S, BipartiteVariant variant) {
  detail::require(!S.empty() && S.size() % 2 == 0, "bipartite-vc2 needs an even number of elements");
  detail::require(std::all_of(S.begin(), S.end(), [](Weight s) { return s > 0; }), "elements must be positive");
  const Weight total = std::accumulate(S.begin(), S.end(), Weight{0});
  detail::require(total % 2 == 0, "bipartite-vc2 needs an even element sum");
  const Weight N = static_cast<Weight>(S.size() / 2);
  if (variant != BipartiteVariant::Mms) {
    const auto [lo, hi] = std::minmax_element(S.begin(), S.end());
    detail::require(*lo >= N * N, "bipartite-vc2 needs min S >= N^2");
    detail::require((*hi - *lo) * N * N < *lo, "bipartite-vc2 needs max S - min S < min S / N^2");
  }
  const bool guards = variant != BipartiteVariant::Mms;
  const AgentId first_element = guards ? 4 : 2;
  const int n = first_element + static_cast<int>(S.size());
  std::vector<Weight> value(static_cast<std::size_t>(n));
  value[0] = value[1] = total / 2;
  if (guards) value[2] = value[3] = 1;
  for (std::size_t i = 0; i < S.size(); ++i) value[first_element + i] = S[i];
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId set : {0, 1}) {
    for (AgentId b = 2; b < n; ++b) edges.emplace_back(set, b);
  }
  if (variant == BipartiteVariant::Ef1) edges.emplace_back(0, 1);
  Forged f{make_instance(n, 2, detail::objective(edges, value)), std::nullopt, {}, std::nullopt, {}};
  if (variant == BipartiteVariant::Mms) {
    f.expectations = {{FairnessNotion::MMS, false, true}};
  } else {
    f.notes.push_back("existence equals the equitable split answer only for N >= 10");
  }
  return f;
}

/// Binary tree of depth 2: hub 0 with c-1 leaves, one star per item hanging off the hub; k = B+1.
inline Forged gen_binpacking_tree(const std::vector<int>& S, int B, int c) {
  detail::require(B >= 2, "binpacking-tree needs B >= 2");
  detail::require(c >= 4, "binpacking-tree needs c >= 4");
  detail::require(!S.empty() && std::all_of(S.begin(), S.end(), [](int s) { return s >= 2; }),
                  "binpacking-tree needs every item >= 2");
  detail::require(std::accumulate(S.begin(), S.end(), 0LL) == 1LL * c * B, "item sizes must sum to c*B");
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (AgentId leaf = 1; leaf < c; ++leaf) edges.emplace_back(0, leaf);
  AgentId next = c;
  for (int s : S) {
    const AgentId center = next++;
    edges.emplace_back(0, center);
    for (int leaf = 1; leaf < s; ++leaf) edges.emplace_back(center, next++);
  }
  Forged f{make_binary_instance(next, B + 1, edges), std::nullopt, {}, std::nullopt, {}};
  const bool packable = bin_packing_solvable(S, B, c);
  f.expectations = {{FairnessNotion::EF, false, packable},
                    {FairnessNotion::EFX0, false, packable},
                    {FairnessNotion::PROP, false, packable}};
  return f;
}

enum class RandomFamily { Tree, Forest, Path, Bipartite, Cover, General };

inline std::optional<RandomFamily> parse_family(std::string_view name) {
  if (name == "tree") return RandomFamily::Tree;
  if (name == "forest") return RandomFamily::Forest;
  if (name == "path") return RandomFamily::Path;
  if (name == "bipartite") return RandomFamily::Bipartite;
  if (name == "cover") return RandomFamily::Cover;
  if (name == "general") return RandomFamily::General;
  return std::nullopt;
}

/// Reproducible random instance; weights uniform in [1, weight_max] per direction.
inline Instance gen_random(int n, int k, RandomFamily family, int weight_max, std::uint64_t seed) {
  detail::require(n >= 1 && k >= 1 && k <= n, "random instance needs 1 <= k <= n");
  detail::require(weight_max >= 1, "weight_max must be positive");
  std::mt19937_64 rng(seed);
  std::vector<AgentId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<AgentId, AgentId>> edges;
  std::bernoulli_distribution coin(0.5);
  auto pick = [&](int below) { return static_cast<int>(rng() % static_cast<unsigned>(below)); };
  switch (family) {
    case RandomFamily::Tree:
      for (int i = 1; i < n; ++i) edges.emplace_back(perm[i], perm[pick(i)]);
      break;
    case RandomFamily::Forest: {
      const int trees = 1 + pick(std::max(1, n / 5));
      for (int i = trees; i < n; ++i) edges.emplace_back(perm[i], perm[pick(i)]);
      break;
    }
    case RandomFamily::Path:
      for (int i = 1; i < n; ++i) edges.emplace_back(perm[i - 1], perm[i]);
      break;
    case RandomFamily::Bipartite: {
      const int left = std::max(1, n / 2);
      for (int i = 0; i < left; ++i) {
        for (int j = left; j < n; ++j) {
          if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
        }
      }
      break;
    }
    case RandomFamily::Cover: {
      const int cover = std::min(3, n);
      for (int i = 0; i < cover; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
        }
      }
      break;
    }
    case RandomFamily::General: {
      std::bernoulli_distribution edge(std::min(1.0, 3.0 / n));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (edge(rng)) edges.emplace_back(i, j);
        }
      }
      break;
    }
  }
  std::uniform_int_distribution<int> weight(1, weight_max);
  detail::WeightMap w;
  for (auto [a, b] : edges) {
    const Weight ab = weight(rng);
    const Weight ba = weight(rng);
    detail::mutual(w, a, b, ab, ba);
  }
  return make_instance(n, k, w);
}

}  // namespace fairpart
