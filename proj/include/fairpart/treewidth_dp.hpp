#pragma once

#include <array>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fairpart/audit.hpp"
#include "fairpart/decomposition.hpp"
#include "fairpart/instance.hpp"

namespace fairpart {

/// Nice decomposition of width <= 1 for a forest. Each tree is rooted at its smallest agent;
/// trees are glued under joins of empty bags.
inline NiceTreeDecomposition nice_decompose_forest(const FriendshipGraph& g) {
  const RootedForest forest = root_forest(g);
  std::vector<TdNode> nodes;
  auto add = [&](NodeKind kind, AgentId agent, std::vector<AgentId> bag, std::vector<int> below) {
    const int id = static_cast<int>(nodes.size());
    TdNode node;
    node.id = id;
    node.kind = kind;
    node.agent = agent;
    node.bag = std::move(bag);
    std::sort(node.bag.begin(), node.bag.end());
    nodes.push_back(std::move(node));
    for (int c : below) nodes[c].parent = id;
    return id;
  };
  auto join_all = [&](const std::vector<int>& tops, const std::vector<AgentId>& bag) {
    int acc = tops[0];
    for (std::size_t t = 1; t < tops.size(); ++t) acc = add(NodeKind::Join, -1, bag, {acc, tops[t]});
    return acc;
  };

  // top[v]: topmost node of the subtree for v, with bag {v}. Built children first.
  std::vector<int> top(static_cast<std::size_t>(g.n()), -1);
  std::vector<std::vector<AgentId>> kids(static_cast<std::size_t>(g.n()));
  for (AgentId v : forest.order) {
    if (forest.parent[v] != -1) kids[forest.parent[v]].push_back(v);
  }
  for (auto it = forest.order.rbegin(); it != forest.order.rend(); ++it) {
    const AgentId v = *it;
    if (kids[v].empty()) {
      int leaf = add(NodeKind::Leaf, -1, {}, {});
      top[v] = add(NodeKind::Introduce, v, {v}, {leaf});
      continue;
    }
    std::vector<int> branches;
    for (AgentId u : kids[v]) {
      int both = add(NodeKind::Introduce, v, {u, v}, {top[u]});
      branches.push_back(add(NodeKind::Forget, u, {v}, {both}));
    }
    top[v] = join_all(branches, {v});
  }
  std::vector<int> trees;
  for (AgentId r : forest.roots) trees.push_back(add(NodeKind::Forget, r, {}, {top[r]}));
  if (trees.empty()) trees.push_back(add(NodeKind::Leaf, -1, {}, {}));
  join_all(trees, {});
  return NiceTreeDecomposition(std::move(nodes));
}

/// (P, f, c, s) over a sorted bag: P[t] part of bag agent t; f and c are bag-size x k, row-major;
/// f counts friends not yet seen promised to each part, c counts forgotten friends per part;
/// s counts forgotten agents per part.
struct DpSignature {
  std::vector<int> P;
  std::vector<int> f;
  std::vector<int> c;
  std::vector<int> s;
  bool operator==(const DpSignature&) const = default;
};

namespace detail {

inline std::size_t hash_ints(const std::vector<int>& v, std::size_t h = 0x9e3779b97f4a7c15ULL) {
  for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ (v.size() * 0x85ebca6bULL);
}

struct IntsHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept { return hash_ints(v); }
};

}  // namespace detail

struct DpSignatureHash {
  std::size_t operator()(const DpSignature& sig) const noexcept {
    return detail::hash_ints(sig.s, detail::hash_ints(sig.c, detail::hash_ints(sig.f, detail::hash_ints(sig.P))));
  }
};

struct DpJoin {
  const std::vector<AgentId>& bag;
  const DpSignature& left;
  const DpSignature& right;
  const DpSignature& result;
};

struct DpOptions {
  std::size_t signature_cap = 5'000'000;  ///< Per-node limit on live signatures.
  std::function<void(const DpJoin&)> on_join;
};

struct DpStats {
  std::size_t total_signatures = 0;
  std::size_t max_node_signatures = 0;
};

/// Exact existence decision for binary utilities over a nice tree decomposition.
class TreewidthDp {
 public:
  TreewidthDp(const Instance& inst, FairnessNotion notion, const SizeVector& sv, const NiceTreeDecomposition& td,
              DpOptions options = {})
      : inst_(inst), notion_(notion), sv_(sv), td_(td), options_(std::move(options)), k_(sv.k()) {
    if (!inst.utilities.is_binary()) throw NotApplicable("treewidth DP requires binary utilities");
    if (sv.total() != inst.n()) throw InvalidInput("size mismatch: sizes do not sum to agent count");
    if (auto err = td.verify(inst.graph)) throw InvalidInput("invalid tree decomposition: " + *err);
    run();
  }

  bool found() const { return root_entry_ >= 0; }
  const DpStats& stats() const { return stats_; }

  /// A partition certified by the table; part i has sv.at(i) agents.
  Partition reconstruct() const {
    if (!found()) throw Error("reconstruct called without a fair partition");
    std::vector<PartIndex> part(static_cast<std::size_t>(inst_.n()), -1);
    std::vector<std::pair<int, int>> stack{{td_.root(), root_entry_}};
    while (!stack.empty()) {
      auto [x, e] = stack.back();
      stack.pop_back();
      const TdNode& node = td_.node(x);
      const DpSignature& sig = tables_[x].sigs[e];
      for (std::size_t t = 0; t < node.bag.size(); ++t) part[node.bag[t]] = sig.P[t];
      const auto& back = tables_[x].back[e];
      for (std::size_t ci = 0; ci < node.children.size(); ++ci) stack.emplace_back(node.children[ci], back[ci]);
    }
    return Partition(std::move(part), k_);
  }

 private:
  struct Table {
    std::vector<DpSignature> sigs;
    std::vector<std::array<int, 2>> back;
    std::unordered_map<DpSignature, int, DpSignatureHash> index;
  };

  int pos_in(const std::vector<AgentId>& bag, AgentId a) const {
    auto it = std::lower_bound(bag.begin(), bag.end(), a);
    return it != bag.end() && *it == a ? static_cast<int>(it - bag.begin()) : -1;
  }

  void insert(Table& table, const std::vector<AgentId>& bag, DpSignature sig, std::array<int, 2> back) {
    for (std::size_t t = 0; t < bag.size(); ++t) {
      int outside = inst_.graph.degree(bag[t]);
      for (AgentId b : bag) outside -= inst_.graph.has_edge(bag[t], b) ? 1 : 0;
      int sum = 0;
      for (int i = 0; i < k_; ++i) sum += sig.f[t * k_ + i] + sig.c[t * k_ + i];
      if (sum != outside) throw std::logic_error("DP signature violates friend accounting");
    }
    if (table.index.contains(sig)) return;
    if (table.sigs.size() >= options_.signature_cap) {
      throw ResourceLimit("treewidth DP exceeded " + std::to_string(options_.signature_cap) + " signatures at a node");
    }
    table.index.emplace(sig, static_cast<int>(table.sigs.size()));
    table.sigs.push_back(std::move(sig));
    table.back.push_back(back);
  }

  // Fairness of the introduced agent given its final per-part friend counts.
  bool fair(int own_part, const std::vector<int>& counts, int degree) const {
    const int own = counts[own_part];
    switch (notion_) {
      case FairnessNotion::PROP: return static_cast<long long>(k_) * own >= degree;
      case FairnessNotion::MMS: return own >= mms_share_;
      default:
        for (int j = 0; j < k_; ++j) {
          if (j != own_part && !binary_envy_ok(notion_, own, counts[j], sv_.at(j))) return false;
        }
        return true;
    }
  }

  void introduce(const TdNode& node, const Table& child, Table& out) {
    const AgentId a = node.agent;
    const int at = pos_in(node.bag, a);
    const int w = static_cast<int>(node.bag.size());
    std::vector<int> bag_friends;  // positions in the new bag
    for (int t = 0; t < w; ++t) {
      if (t != at && inst_.graph.has_edge(a, node.bag[t])) bag_friends.push_back(t);
    }
    const int degree = inst_.graph.degree(a);
    const int outside = degree - static_cast<int>(bag_friends.size());
    if (notion_ == FairnessNotion::MMS) mms_share_ = binary_mms_share(degree, sv_);

    std::vector<int> occupied(static_cast<std::size_t>(k_));
    std::vector<int> counts(static_cast<std::size_t>(k_));
    std::vector<int> room(static_cast<std::size_t>(k_));
    for (int e = 0; e < static_cast<int>(child.sigs.size()); ++e) {
      const DpSignature& old = child.sigs[e];
      for (int i = 0; i < k_; ++i) {
        DpSignature sig;
        sig.s = old.s;
        sig.P = old.P;
        sig.P.insert(sig.P.begin() + at, i);
        sig.f = old.f;
        sig.f.insert(sig.f.begin() + at * k_, static_cast<std::size_t>(k_), 0);
        sig.c = old.c;
        sig.c.insert(sig.c.begin() + at * k_, static_cast<std::size_t>(k_), 0);
        std::fill(occupied.begin(), occupied.end(), 0);
        for (int t = 0; t < w; ++t) ++occupied[sig.P[t]];
        if (sig.s[i] + occupied[i] > sv_.at(i)) continue;
        bool ok = true;
        std::fill(counts.begin(), counts.end(), 0);
        for (int t : bag_friends) {
          int& promised = sig.f[t * k_ + i];
          if (--promised < 0) ok = false;
          ++counts[sig.P[t]];
        }
        if (!ok) continue;
        for (int j = 0; j < k_; ++j) room[j] = sv_.at(j) - sig.s[j] - occupied[j];
        // Compositions of `outside` into f(a, .) bounded by the room left in each part.
        std::vector<int> promise(static_cast<std::size_t>(k_), 0);
        auto rec = [&](auto&& self, int j, int left) -> void {
          if (j == k_ - 1) {
            if (left > room[j]) return;
            promise[j] = left;
            std::vector<int> total = counts;
            for (int q = 0; q < k_; ++q) total[q] += promise[q];
            if (!fair(i, total, degree)) return;
            DpSignature next = sig;
            std::copy(promise.begin(), promise.end(), next.f.begin() + at * k_);
            insert(out, node.bag, std::move(next), {e, -1});
            return;
          }
          for (int v = 0; v <= std::min(left, room[j]); ++v) {
            promise[j] = v;
            self(self, j + 1, left - v);
          }
        };
        rec(rec, 0, outside);
      }
    }
  }

  void forget(const TdNode& node, const TdNode& below, const Table& child, Table& out) {
    const AgentId a = node.agent;
    const int at = pos_in(below.bag, a);
    for (int e = 0; e < static_cast<int>(child.sigs.size()); ++e) {
      const DpSignature& old = child.sigs[e];
      bool pending = false;
      for (int i = 0; i < k_; ++i) pending = pending || old.f[at * k_ + i] != 0;
      if (pending) continue;
      const int p = old.P[at];
      DpSignature sig = old;
      ++sig.s[p];
      for (std::size_t t = 0; t < below.bag.size(); ++t) {
        if (static_cast<int>(t) != at && inst_.graph.has_edge(a, below.bag[t])) ++sig.c[t * k_ + p];
      }
      sig.P.erase(sig.P.begin() + at);
      sig.f.erase(sig.f.begin() + at * k_, sig.f.begin() + (at + 1) * k_);
      sig.c.erase(sig.c.begin() + at * k_, sig.c.begin() + (at + 1) * k_);
      insert(out, node.bag, std::move(sig), {e, -1});
    }
  }

  void join(const TdNode& node, const Table& left, const Table& right, Table& out) {
    std::unordered_map<std::vector<int>, std::vector<int>, detail::IntsHash> by_part;
    for (int e = 0; e < static_cast<int>(right.sigs.size()); ++e) by_part[right.sigs[e].P].push_back(e);
    const int w = static_cast<int>(node.bag.size());
    std::vector<int> occupied(static_cast<std::size_t>(k_));
    for (int ey = 0; ey < static_cast<int>(left.sigs.size()); ++ey) {
      const DpSignature& y = left.sigs[ey];
      auto it = by_part.find(y.P);
      if (it == by_part.end()) continue;
      std::fill(occupied.begin(), occupied.end(), 0);
      for (int t = 0; t < w; ++t) ++occupied[y.P[t]];
      for (int ez : it->second) {
        const DpSignature& z = right.sigs[ez];
        bool ok = true;
        DpSignature sig;
        sig.P = y.P;
        sig.f.resize(y.f.size());
        sig.c.resize(y.c.size());
        for (std::size_t q = 0; q < y.f.size() && ok; ++q) {
          const int fy = y.f[q] - z.c[q];
          if (fy != z.f[q] - y.c[q] || fy < 0) ok = false;
          sig.f[q] = fy;
          sig.c[q] = y.c[q] + z.c[q];
        }
        if (!ok) continue;
        sig.s.resize(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_ && ok; ++i) {
          sig.s[i] = y.s[i] + z.s[i];
          if (sig.s[i] + occupied[i] > sv_.at(i)) ok = false;
        }
        if (!ok) continue;
        if (options_.on_join) options_.on_join(DpJoin{node.bag, y, z, sig});
        insert(out, node.bag, std::move(sig), {ey, ez});
      }
    }
  }

  void run() {
    tables_.resize(static_cast<std::size_t>(td_.size()));
    for (int x : td_.post_order()) {
      const TdNode& node = td_.node(x);
      Table& out = tables_[x];
      switch (node.kind) {
        case NodeKind::Leaf: insert(out, node.bag, DpSignature{{}, {}, {}, std::vector<int>(k_, 0)}, {-1, -1}); break;
        case NodeKind::Introduce: introduce(node, tables_[node.children[0]], out); break;
        case NodeKind::Forget: forget(node, td_.node(node.children[0]), tables_[node.children[0]], out); break;
        case NodeKind::Join: join(node, tables_[node.children[0]], tables_[node.children[1]], out); break;
      }
      out.index.clear();
      out.index.rehash(0);
      stats_.total_signatures += out.sigs.size();
      stats_.max_node_signatures = std::max(stats_.max_node_signatures, out.sigs.size());
    }
    const Table& root = tables_[td_.root()];
    for (int e = 0; e < static_cast<int>(root.sigs.size()); ++e) {
      if (root.sigs[e].s == sv_.values()) {
        root_entry_ = e;
        break;
      }
    }
  }

  const Instance& inst_;
  FairnessNotion notion_;
  SizeVector sv_;
  const NiceTreeDecomposition& td_;
  DpOptions options_;
  int k_;
  int mms_share_ = 0;
  std::vector<Table> tables_;
  int root_entry_ = -1;
  DpStats stats_;
};

/// Decomposition stored with the instance, or a computed one for forests.
inline NiceTreeDecomposition decomposition_for(const Instance& inst) {
  if (inst.decomposition) return *inst.decomposition;
  if (!is_forest(inst.graph)) throw NotApplicable("no tree decomposition supplied for a graph with cycles");
  return nice_decompose_forest(inst.graph);
}

inline bool dp_exists(const Instance& inst, FairnessNotion notion, const SizeVector& sv,
                      const NiceTreeDecomposition& td, DpOptions options = {}) {
  return TreewidthDp(inst, notion, sv, td, std::move(options)).found();
}

/// Fair partition for the instance's own size vector, or nullopt.
inline std::optional<Partition> dp_solve(const Instance& inst, FairnessNotion notion, DpOptions options = {}) {
  const NiceTreeDecomposition td = decomposition_for(inst);
  TreewidthDp dp(inst, notion, inst.sizes, td, std::move(options));
  if (!dp.found()) return std::nullopt;
  return dp.reconstruct();
}

}  // namespace fairpart
