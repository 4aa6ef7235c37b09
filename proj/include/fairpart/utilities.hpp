#pragma once

#include <concepts>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairpart/graph.hpp"
#include "fairpart/types.hpp"

namespace fairpart {

/// Additive utilities over a friendship graph: u_a(b) > 0 exactly when {a,b} is an edge.
/// Weights are stored aligned with FriendshipGraph::friends(a).
class UtilityProfile {
 public:
  UtilityProfile() = default;

  /// Every friend pair gets weight 1.
  static UtilityProfile binary(const FriendshipGraph& g) {
    UtilityProfile p;
    p.friends_.resize(static_cast<std::size_t>(g.n()));
    p.weights_.resize(static_cast<std::size_t>(g.n()));
    for (AgentId a = 0; a < g.n(); ++a) {
      auto fr = g.friends(a);
      p.friends_[a].assign(fr.begin(), fr.end());
      p.weights_[a].assign(fr.size(), 1);
    }
    p.finish();
    return p;
  }

  /// `weights` maps ordered pairs (a,b) to u_a(b); missing pairs of an edge are an error.
  UtilityProfile(const FriendshipGraph& g, const std::map<std::pair<AgentId, AgentId>, Weight>& weights) {
    friends_.resize(static_cast<std::size_t>(g.n()));
    weights_.resize(static_cast<std::size_t>(g.n()));
    for (AgentId a = 0; a < g.n(); ++a) {
      auto fr = g.friends(a);
      friends_[a].assign(fr.begin(), fr.end());
      weights_[a].reserve(fr.size());
      for (AgentId b : fr) {
        auto it = weights.find({a, b});
        if (it == weights.end()) {
          throw InvalidInput("missing weight for pair " + std::to_string(a) + " " + std::to_string(b));
        }
        if (it->second <= 0) {
          throw InvalidInput("zero weight on edge " + std::to_string(std::min(a, b)) + " " +
                             std::to_string(std::max(a, b)));
        }
        weights_[a].push_back(it->second);
      }
    }
    for (const auto& [pair, w] : weights) {
      if (!g.has_edge(pair.first, pair.second)) {
        throw InvalidInput("weight given for non-edge " + std::to_string(pair.first) + " " +
                           std::to_string(pair.second));
      }
    }
    finish();
  }

  int n() const { return static_cast<int>(friends_.size()); }
  std::span<const AgentId> friends(AgentId a) const { return friends_[a]; }
  std::span<const Weight> weights(AgentId a) const { return weights_[a]; }

  Weight weight(AgentId a, AgentId b) const {
    const auto& list = friends_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b);
    if (it == list.end() || *it != b) return 0;
    return weights_[a][static_cast<std::size_t>(it - list.begin())];
  }

  /// u_a(Fr(a)).
  Weight total(AgentId a) const { return totals_[a]; }

  Weight value(AgentId a, std::span<const AgentId> set) const {
    Weight sum = 0;
    for (AgentId b : set) sum += weight(a, b);
    return sum;
  }

  bool is_binary() const { return binary_; }
  bool is_symmetric() const { return symmetric_; }
  bool is_objective() const { return objective_; }

 private:
  void finish() {
    totals_.assign(friends_.size(), 0);
    binary_ = true;
    for (std::size_t a = 0; a < friends_.size(); ++a) {
      for (Weight w : weights_[a]) {
        totals_[a] += w;
        if (w != 1) binary_ = false;
      }
    }
    symmetric_ = true;
    for (AgentId a = 0; a < n() && symmetric_; ++a) {
      for (std::size_t i = 0; i < friends_[a].size(); ++i) {
        if (weight(friends_[a][i], a) != weights_[a][i]) {
          symmetric_ = false;
          break;
        }
      }
    }
    // Objective: every friend of b values b the same.
    objective_ = true;
    std::vector<Weight> seen(friends_.size(), 0);
    for (AgentId a = 0; a < n() && objective_; ++a) {
      for (std::size_t i = 0; i < friends_[a].size(); ++i) {
        AgentId b = friends_[a][i];
        Weight w = weights_[a][i];
        if (seen[b] == 0) {
          seen[b] = w;
        } else if (seen[b] != w) {
          objective_ = false;
          break;
        }
      }
    }
  }

  std::vector<std::vector<AgentId>> friends_;
  std::vector<std::vector<Weight>> weights_;
  std::vector<Weight> totals_;
  bool binary_ = true;
  bool symmetric_ = true;
  bool objective_ = true;
};

struct UtilityClass {
  bool binary;
  bool symmetric;
  bool objective;
};

inline UtilityClass classify_utilities(const UtilityProfile& p) {
  return {p.is_binary(), p.is_symmetric(), p.is_objective()};
}

/// Monotone set valuation: value(a, S) for a set S of agents not containing a.
/// value must be monotone in S and zero on sets without friends of a.
template <class V>
concept SetValuation = requires(const V& v, AgentId a, std::span<const AgentId> set) {
  { v.value(a, set) } -> std::convertible_to<Weight>;
};

/// Valuations that also expose per-friend additive weights unlock linear-time subset selection.
template <class V>
concept AdditiveValuation = SetValuation<V> && requires(const V& v, AgentId a, AgentId b) {
  { v.weight(a, b) } -> std::convertible_to<Weight>;
};

static_assert(AdditiveValuation<UtilityProfile>);

}  // namespace fairpart
