#pragma once

#include <algorithm>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairpart/types.hpp"

namespace fairpart {

/// Simple undirected graph on agents 0..n-1. Adjacency lists are sorted.
class FriendshipGraph {
 public:
  FriendshipGraph() = default;

  FriendshipGraph(int n, const std::vector<std::pair<AgentId, AgentId>>& edges)
      : adjacency_(static_cast<std::size_t>(n)) {
    if (n < 1) throw InvalidInput("agent count must be positive");
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n) {
        throw InvalidInput("edge endpoint out of range: " + std::to_string(a) + " " +
                           std::to_string(b));
      }
      if (a == b) throw InvalidInput("self-loop on agent " + std::to_string(a));
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (std::size_t a = 0; a < adjacency_.size(); ++a) {
      auto& list = adjacency_[a];
      std::sort(list.begin(), list.end());
      if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
        throw InvalidInput("duplicate edge at agent " + std::to_string(a));
      }
    }
    edge_count_ = static_cast<int>(edges.size());
  }

  int n() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return edge_count_; }

  std::span<const AgentId> friends(AgentId a) const { return adjacency_[a]; }
  int degree(AgentId a) const { return static_cast<int>(adjacency_[a].size()); }

  int max_degree() const {
    int best = 0;
    for (const auto& list : adjacency_) best = std::max(best, static_cast<int>(list.size()));
    return best;
  }

  bool has_edge(AgentId a, AgentId b) const {
    const auto& list = adjacency_[a];
    return std::binary_search(list.begin(), list.end(), b);
  }

  /// Position of b in friends(a), or -1.
  int friend_index(AgentId a, AgentId b) const {
    const auto& list = adjacency_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b);
    if (it == list.end() || *it != b) return -1;
    return static_cast<int>(it - list.begin());
  }

  /// Edges with a < b, ordered lexicographically.
  std::vector<std::pair<AgentId, AgentId>> edges() const {
    std::vector<std::pair<AgentId, AgentId>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (AgentId a = 0; a < n(); ++a) {
      for (AgentId b : adjacency_[a]) {
        if (a < b) out.emplace_back(a, b);
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<AgentId>> adjacency_;
  int edge_count_ = 0;
};

/// Component label per agent; labels are numbered by smallest member.
inline std::vector<int> connected_components(const FriendshipGraph& g) {
  std::vector<int> label(static_cast<std::size_t>(g.n()), -1);
  int next = 0;
  std::vector<AgentId> stack;
  for (AgentId s = 0; s < g.n(); ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      AgentId v = stack.back();
      stack.pop_back();
      for (AgentId w : g.friends(v)) {
        if (label[w] == -1) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

inline bool is_forest(const FriendshipGraph& g) {
  auto label = connected_components(g);
  int components = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  return g.edge_count() == g.n() - components;
}

/// A single path covering all agents (one agent counts as a path).
inline bool is_path(const FriendshipGraph& g) {
  if (g.edge_count() != g.n() - 1 || !is_forest(g)) return false;
  for (AgentId a = 0; a < g.n(); ++a) {
    if (g.degree(a) > 2) return false;
  }
  return true;
}

/// Agents in the path order starting from the smaller endpoint.
inline std::vector<AgentId> path_order(const FriendshipGraph& g) {
  if (!is_path(g)) throw NotApplicable("graph is not a path");
  AgentId start = 0;
  if (g.n() > 1) {
    for (AgentId a = 0; a < g.n(); ++a) {
      if (g.degree(a) == 1) {
        start = a;
        break;
      }
    }
  }
  std::vector<AgentId> order{start};
  AgentId prev = -1;
  AgentId cur = start;
  while (static_cast<int>(order.size()) < g.n()) {
    for (AgentId next : g.friends(cur)) {
      if (next != prev) {
        prev = cur;
        cur = next;
        break;
      }
    }
    order.push_back(cur);
  }
  return order;
}

/// Rooted view of a forest: each tree is rooted at its smallest agent.
struct RootedForest {
  std::vector<AgentId> parent;  ///< -1 for roots.
  std::vector<AgentId> order;   ///< BFS order, trees by ascending root.
  std::vector<AgentId> roots;
};

inline RootedForest root_forest(const FriendshipGraph& g) {
  if (!is_forest(g)) throw NotApplicable("friendship graph contains a cycle");
  RootedForest forest;
  forest.parent.assign(static_cast<std::size_t>(g.n()), -1);
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  forest.order.reserve(static_cast<std::size_t>(g.n()));
  std::queue<AgentId> queue;
  for (AgentId r = 0; r < g.n(); ++r) {
    if (seen[r]) continue;
    forest.roots.push_back(r);
    seen[r] = 1;
    queue.push(r);
    while (!queue.empty()) {
      AgentId v = queue.front();
      queue.pop();
      forest.order.push_back(v);
      for (AgentId w : g.friends(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          forest.parent[w] = v;
          queue.push(w);
        }
      }
    }
  }
  return forest;
}

}  // namespace fairpart
