#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpart/graph.hpp"
#include "fairpart/types.hpp"

namespace fairpart {

enum class NodeKind { Leaf, Introduce, Forget, Join };

constexpr std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Introduce: return "introduce";
    case NodeKind::Forget: return "forget";
    case NodeKind::Join: return "join";
  }
  return "?";
}

struct TdNode {
  int id = 0;  ///< Label used in files; internal links use vector positions.
  NodeKind kind = NodeKind::Leaf;
  AgentId agent = -1;  ///< Introduced or forgotten agent.
  int parent = -1;     ///< Position of the parent, -1 at the root.
  std::vector<int> children;
  std::vector<AgentId> bag;  ///< Sorted.
};

/// Rooted nice tree decomposition with empty root and leaf bags.
class NiceTreeDecomposition {
 public:
  NiceTreeDecomposition() = default;

  /// Builds child lists from parent links. Structural checks happen in verify().
  explicit NiceTreeDecomposition(std::vector<TdNode> nodes) : nodes_(std::move(nodes)) {
    for (auto& node : nodes_) {
      std::sort(node.bag.begin(), node.bag.end());
      node.children.clear();
    }
    root_ = -1;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      int p = nodes_[i].parent;
      if (p == -1) {
        if (root_ != -1) throw InvalidInput("decomposition has more than one root");
        root_ = static_cast<int>(i);
      } else {
        if (p < 0 || p >= static_cast<int>(nodes_.size())) throw InvalidInput("unknown parent node");
        nodes_[p].children.push_back(static_cast<int>(i));
      }
    }
    if (root_ == -1) throw InvalidInput("decomposition has no root");
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const TdNode& node(int i) const { return nodes_[i]; }
  const std::vector<TdNode>& nodes() const { return nodes_; }

  int width() const {
    int w = 0;
    for (const auto& node : nodes_) w = std::max(w, static_cast<int>(node.bag.size()));
    return w - 1;
  }

  /// Children before parents. Throws on cycles or unreachable nodes.
  std::vector<int> post_order() const {
    std::vector<int> order;
    order.reserve(nodes_.size());
    std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
    std::vector<char> seen(nodes_.size(), 0);
    seen[root_] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < nodes_[v].children.size()) {
        int c = nodes_[v].children[next++];
        if (seen[c]) throw InvalidInput("decomposition is not a tree");
        seen[c] = 1;
        stack.emplace_back(c, 0);
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
    if (order.size() != nodes_.size()) throw InvalidInput("decomposition is not connected");
    return order;
  }

  /// nullopt if this is a valid nice tree decomposition of g; otherwise the violated clause.
  std::optional<std::string> verify(const FriendshipGraph& g) const {
    std::vector<int> order;
    try {
      order = post_order();
    } catch (const InvalidInput& e) {
      return std::string(e.what());
    }
    auto in_bag = [](const std::vector<AgentId>& bag, AgentId a) {
      return std::binary_search(bag.begin(), bag.end(), a);
    };
    if (!nodes_[root_].bag.empty()) return "root bag not empty";
    for (const auto& node : nodes_) {
      for (AgentId a : node.bag) {
        if (a < 0 || a >= g.n()) return "bag agent out of range in node " + std::to_string(node.id);
      }
      if (std::adjacent_find(node.bag.begin(), node.bag.end()) != node.bag.end()) {
        return "repeated agent in bag of node " + std::to_string(node.id);
      }
      const std::string where = " at node " + std::to_string(node.id);
      switch (node.kind) {
        case NodeKind::Leaf:
          if (!node.children.empty()) return "leaf with children" + where;
          if (!node.bag.empty()) return "leaf bag not empty" + where;
          break;
        case NodeKind::Introduce: {
          if (node.children.size() != 1) return "introduce node needs one child" + where;
          const auto& child = nodes_[node.children[0]].bag;
          if (!in_bag(node.bag, node.agent) || in_bag(child, node.agent)) {
            return "introduced agent mismatch" + where;
          }
          std::vector<AgentId> expect = child;
          expect.push_back(node.agent);
          std::sort(expect.begin(), expect.end());
          if (expect != node.bag) return "introduce bag mismatch" + where;
          break;
        }
        case NodeKind::Forget: {
          if (node.children.size() != 1) return "forget node needs one child" + where;
          const auto& child = nodes_[node.children[0]].bag;
          if (in_bag(node.bag, node.agent) || !in_bag(child, node.agent)) {
            return "forgotten agent mismatch" + where;
          }
          std::vector<AgentId> expect = node.bag;
          expect.push_back(node.agent);
          std::sort(expect.begin(), expect.end());
          if (expect != child) return "forget bag mismatch" + where;
          break;
        }
        case NodeKind::Join:
          if (node.children.size() != 2) return "join node needs two children" + where;
          for (int c : node.children) {
            if (nodes_[c].bag != node.bag) return "join bag mismatch" + where;
          }
          break;
      }
    }
    // Each agent's bags form one connected subtree: exactly one topmost occurrence.
    std::vector<int> tops(static_cast<std::size_t>(g.n()), 0);
    for (const auto& node : nodes_) {
      for (AgentId a : node.bag) {
        if (node.parent == -1 || !in_bag(nodes_[node.parent].bag, a)) ++tops[a];
      }
    }
    for (AgentId a = 0; a < g.n(); ++a) {
      if (tops[a] == 0) return "agent " + std::to_string(a) + " not covered";
      if (tops[a] > 1) return "bags of agent " + std::to_string(a) + " not connected";
    }
    for (auto [a, b] : g.edges()) {
      bool covered = std::any_of(nodes_.begin(), nodes_.end(), [&](const TdNode& node) {
        return in_bag(node.bag, a) && in_bag(node.bag, b);
      });
      if (!covered) return "edge " + std::to_string(a) + " " + std::to_string(b) + " not covered";
    }
    return std::nullopt;
  }

 private:
  std::vector<TdNode> nodes_;
  int root_ = -1;
};

}  // namespace fairpart
