#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fairpart/audit.hpp"
#include "fairpart/instance.hpp"

namespace fairpart {

inline constexpr int kEnvyCoverCap = 4;
inline constexpr int kShareCoverCap = 5;

/// Minimum vertex cover by bounded branching on the first uncovered edge. Sorted ascending.
inline std::vector<AgentId> find_min_vertex_cover(const FriendshipGraph& g, int cap) {
  const auto edges = g.edges();
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  std::vector<AgentId> chosen;
  std::function<bool(int)> branch = [&](int budget) -> bool {
    auto uncovered = std::find_if(edges.begin(), edges.end(), [&](const auto& e) { return !in[e.first] && !in[e.second]; });
    if (uncovered == edges.end()) return true;
    if (budget == 0) return false;
    for (AgentId pick : {uncovered->first, uncovered->second}) {
      in[pick] = 1;
      chosen.push_back(pick);
      if (branch(budget - 1)) return true;
      chosen.pop_back();
      in[pick] = 0;
    }
    return false;
  };
  for (int size = 0; size <= cap; ++size) {
    if (branch(size)) {
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
  }
  throw ResourceLimit("vertex cover number exceeds cap " + std::to_string(cap));
}

/// Agents outside the cover with neighbourhood exactly X (bit t = t-th cover agent).
struct IndependentType {
  unsigned mask = 0;
  std::vector<AgentId> members;
};

/// One guess: parts containing cover agents (main groups) and parts without (extra groups).
struct GuessFrame {
  std::vector<std::vector<AgentId>> main_groups;
  std::vector<int> sizes;  ///< Main groups first, then extra groups.
  int groups() const { return static_cast<int>(sizes.size()); }
  int main_count() const { return static_cast<int>(main_groups.size()); }
};

struct VcOptions {
  std::optional<int> cover_cap;  ///< Defaults to 4 for envy notions, 5 for share notions.
  long long node_limit = 50'000'000;
};

struct VcResult {
  std::optional<Partition> partition;
  std::vector<AgentId> cover;
  long long frames = 0;
  long long nodes = 0;
};

/// Integer program for one frame: count[t][g] agents of type t in group g. Solved by depth-first
/// search with bound pruning; an agent without cover friends fills whatever room is left.
class FeasibilityProgram {
 public:
  FeasibilityProgram(const Instance& inst, FairnessNotion notion, const std::vector<AgentId>& cover,
                     const std::vector<IndependentType>& types, const GuessFrame& frame, long long* nodes,
                     long long node_limit)
      : inst_(inst), notion_(notion), cover_(cover), frame_(frame), nodes_(nodes), node_limit_(node_limit) {
    const int G = frame.groups();
    const int u = static_cast<int>(cover.size());
    k_ = G;
    for (const auto& t : types) {
      if (t.mask != 0) types_.push_back(&t);
    }
    // Types with more cover friends constrain more; place them first.
    std::stable_sort(types_.begin(), types_.end(), [](const IndependentType* a, const IndependentType* b) {
      return std::popcount(a->mask) > std::popcount(b->mask);
    });
    group_of_.assign(static_cast<std::size_t>(u), -1);
    room_.assign(frame.sizes.begin(), frame.sizes.end());
    for (int g = 0; g < frame.main_count(); ++g) {
      for (AgentId a : frame.main_groups[g]) group_of_[cover_index(a)] = g;
      room_[g] -= static_cast<int>(frame.main_groups[g].size());
    }
    count_.assign(static_cast<std::size_t>(u), std::vector<int>(static_cast<std::size_t>(G), 0));
    remaining_.assign(static_cast<std::size_t>(u), 0);
    for (int i = 0; i < u; ++i) {
      for (int j = 0; j < u; ++j) {
        if (inst.graph.has_edge(cover[i], cover[j])) ++count_[i][group_of_[j]];
      }
    }
    for (const auto* t : types_) {
      for (int i = 0; i < u; ++i) {
        if (t->mask >> i & 1u) remaining_[i] += static_cast<int>(t->members.size());
      }
    }
    share_.assign(static_cast<std::size_t>(u), 0);
    for (int i = 0; i < u; ++i) {
      const int deg = inst.graph.degree(cover[i]);
      if (notion == FairnessNotion::PROP) share_[i] = (deg + G - 1) / G;
      if (notion == FairnessNotion::MMS) share_[i] = binary_mms_share(deg, SizeVector(frame.sizes));
    }
    allowed_.assign(types_.size(), std::vector<char>(static_cast<std::size_t>(G), 0));
    for (std::size_t t = 0; t < types_.size(); ++t) {
      for (int g = 0; g < G; ++g) allowed_[t][g] = independent_fair(types_[t]->mask, g);
    }
    assign_.assign(types_.size(), std::vector<int>(static_cast<std::size_t>(G), 0));
    tied_.assign(static_cast<std::size_t>(G), 0);
    for (int g = frame.main_count() + 1; g < G; ++g) tied_[g] = frame.sizes[g] == frame.sizes[g - 1];
  }

  /// Whether an agent outside the cover with friends `mask` is fair in group g. Exact: its friend
  /// counts are fixed by the frame.
  bool independent_fair(unsigned mask, int g) const {
    std::vector<int> counts(static_cast<std::size_t>(k_), 0);
    int degree = 0;
    for (std::size_t i = 0; i < cover_.size(); ++i) {
      if (mask >> i & 1u) {
        ++counts[group_of_[i]];
        ++degree;
      }
    }
    return fair_counts(g, counts, degree, notion_ == FairnessNotion::MMS ? binary_mms_share(degree, SizeVector(frame_.sizes)) : 0);
  }

  bool allowed(std::size_t type, int g) const { return allowed_[type][g] != 0; }
  const std::vector<const IndependentType*>& types() const { return types_; }

  /// Per-type group counts for the ordered types(), or nullopt if infeasible.
  std::optional<std::vector<std::vector<int>>> solve() {
    if (search(0, 0, types_.empty() ? 0 : static_cast<int>(types_[0]->members.size()))) return assign_;
    return std::nullopt;
  }

 private:
  int cover_index(AgentId a) const {
    return static_cast<int>(std::lower_bound(cover_.begin(), cover_.end(), a) - cover_.begin());
  }

  bool fair_counts(int own_part, const std::vector<int>& counts, int degree, int mms) const {
    const int own = counts[own_part];
    switch (notion_) {
      case FairnessNotion::PROP: return static_cast<long long>(k_) * own >= degree;
      case FairnessNotion::MMS: return own >= mms;
      default:
        for (int j = 0; j < k_; ++j) {
          if (j != own_part && !binary_envy_ok(notion_, own, counts[j], frame_.sizes[j])) return false;
        }
        return true;
    }
  }

  // Necessary condition for cover agents with unassigned friends; exact once none remain.
  bool cover_ok() const {
    for (std::size_t i = 0; i < cover_.size(); ++i) {
      const int g = group_of_[i];
      const int own_max = count_[i][g] + std::min(remaining_[i], room_[g]);
      if (notion_ == FairnessNotion::PROP || notion_ == FairnessNotion::MMS) {
        if (own_max < share_[i]) return false;
        continue;
      }
      // The required own count grows with the target count, so the current count bounds it.
      for (int j = 0; j < k_; ++j) {
        if (j != g && !binary_envy_ok(notion_, own_max, count_[i][j], frame_.sizes[j])) return false;
      }
    }
    return true;
  }

  // Adds v agents of type t to group g (negative v undoes).
  void place(std::size_t t, int g, int v) {
    assign_[t][g] += v;
    room_[g] -= v;
    for (std::size_t i = 0; i < cover_.size(); ++i) {
      if (types_[t]->mask >> i & 1u) {
        count_[i][g] += v;
        remaining_[i] -= v;
      }
    }
  }

  bool search(std::size_t t, int g, int left) {
    if (++*nodes_ > node_limit_) throw ResourceLimit("vertex cover search exceeded node limit");
    if (t == types_.size()) return cover_ok();
    if (g == k_) {
      if (left != 0) return false;
      if (!cover_ok()) return false;
      const int next = t + 1 < types_.size() ? static_cast<int>(types_[t + 1]->members.size()) : 0;
      return search(t + 1, 0, next);
    }
    int later = 0;
    for (int h = g + 1; h < k_; ++h) later += allowed_[t][h] ? room_[h] : 0;
    int hi = allowed_[t][g] ? std::min(left, room_[g]) : 0;
    if (tied_[g]) hi = std::min(hi, assign_[t][g - 1]);
    const int lo = std::max(0, left - later);
    if (lo > hi) return false;
    // Proportional split first.
    const int total = later + (allowed_[t][g] ? room_[g] : 0);
    const int ideal = total == 0 ? 0 : static_cast<int>(static_cast<long long>(left) * room_[g] / total);
    std::vector<int> values;
    for (int v = lo; v <= hi; ++v) values.push_back(v);
    std::stable_sort(values.begin(), values.end(), [&](int a, int b) { return std::abs(a - ideal) < std::abs(b - ideal); });
    const bool was_tied = tied_[g];
    for (int v : values) {
      place(t, g, v);
      tied_[g] = was_tied && v == assign_[t][g - 1];
      if (search(t, g + 1, left - v)) return true;
      tied_[g] = was_tied;
      place(t, g, -v);
    }
    return false;
  }

  const Instance& inst_;
  FairnessNotion notion_;
  const std::vector<AgentId>& cover_;
  const GuessFrame& frame_;
  long long* nodes_;
  long long node_limit_;
  int k_ = 0;
  std::vector<const IndependentType*> types_;
  std::vector<int> group_of_;
  std::vector<int> room_;
  std::vector<std::vector<int>> count_;
  std::vector<int> remaining_;
  std::vector<int> share_;
  std::vector<std::vector<char>> allowed_;
  std::vector<std::vector<int>> assign_;
  std::vector<char> tied_;
};

/// Types I^X over the cover, ordered by mask; X = 0 collects agents without friends.
inline std::vector<IndependentType> independent_types(const FriendshipGraph& g, const std::vector<AgentId>& cover) {
  std::map<unsigned, std::vector<AgentId>> by_mask;
  for (AgentId v = 0; v < g.n(); ++v) {
    if (std::binary_search(cover.begin(), cover.end(), v)) continue;
    unsigned mask = 0;
    for (AgentId w : g.friends(v)) {
      mask |= 1u << (std::lower_bound(cover.begin(), cover.end(), w) - cover.begin());
    }
    by_mask[mask].push_back(v);
  }
  std::vector<IndependentType> out;
  for (auto& [mask, members] : by_mask) out.push_back({mask, std::move(members)});
  return out;
}

namespace detail {

/// Calls visit(blocks) for every set partition of `items` into exactly `parts` blocks.
inline void for_each_set_partition(const std::vector<AgentId>& items, int parts,
                                   const std::function<bool(const std::vector<std::vector<AgentId>>&)>& visit) {
  std::vector<std::vector<AgentId>> blocks;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    const int open = static_cast<int>(blocks.size());
    if (static_cast<int>(items.size() - i) < parts - open) return true;
    if (i == items.size()) return open == parts ? visit(blocks) : true;
    for (int b = 0; b < open; ++b) {
      blocks[b].push_back(items[i]);
      bool go = rec(i + 1);
      blocks[b].pop_back();
      if (!go) return false;
    }
    if (open < parts) {
      blocks.push_back({items[i]});
      bool go = rec(i + 1);
      blocks.pop_back();
      if (!go) return false;
    }
    return true;
  };
  rec(0);
}

/// Distinct size tuples for the main groups drawn from the multiset sv, each at least `need`.
inline std::vector<std::vector<int>> main_size_choices(const SizeVector& sv, const std::vector<int>& need) {
  std::vector<std::vector<int>> out;
  std::map<int, int> pool;
  for (int s : sv.values()) ++pool[s];
  std::vector<int> pick;
  std::function<void()> rec = [&] {
    if (pick.size() == need.size()) {
      out.push_back(pick);
      return;
    }
    for (auto& [size, left] : pool) {
      if (left == 0 || size < need[pick.size()]) continue;
      --left;
      pick.push_back(size);
      rec();
      pick.pop_back();
      ++left;
    }
  };
  rec();
  return out;
}

}  // namespace detail

/// Exact existence decision for binary utilities, parameterized by the vertex cover number.
inline VcResult vc_solve(const Instance& inst, FairnessNotion notion, const SizeVector& sv, VcOptions options = {}) {
  if (!inst.utilities.is_binary()) throw NotApplicable("vertex cover solver requires binary utilities");
  if (sv.total() != inst.n()) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  const int cap = options.cover_cap.value_or(is_envy_notion(notion) ? kEnvyCoverCap : kShareCoverCap);
  VcResult result;
  result.cover = find_min_vertex_cover(inst.graph, cap);
  const auto types = independent_types(inst.graph, result.cover);
  const int u = static_cast<int>(result.cover.size());
  const int k = sv.k();

  for (int l = u == 0 ? 0 : 1; l <= std::min(u, k); ++l) {
    auto try_blocks = [&](const std::vector<std::vector<AgentId>>& blocks) -> bool {
      std::vector<int> need;
      for (const auto& b : blocks) need.push_back(static_cast<int>(b.size()));
      for (const auto& mains : detail::main_size_choices(sv, need)) {
        GuessFrame frame;
        frame.main_groups = blocks;
        frame.sizes = mains;
        std::vector<int> rest = sv.values();
        for (int s : mains) rest.erase(std::find(rest.begin(), rest.end(), s));
        frame.sizes.insert(frame.sizes.end(), rest.begin(), rest.end());
        ++result.frames;
        FeasibilityProgram program(inst, notion, result.cover, types, frame, &result.nodes, options.node_limit);
        auto counts = program.solve();
        if (!counts) continue;

        // Concrete groups: cover blocks, then type members in ascending type order and id.
        std::vector<std::vector<AgentId>> groups(static_cast<std::size_t>(k));
        for (int g = 0; g < frame.main_count(); ++g) groups[g] = blocks[g];
        std::map<unsigned, std::vector<int>> by_mask;
        for (std::size_t t = 0; t < program.types().size(); ++t) by_mask[program.types()[t]->mask] = (*counts)[t];
        for (const auto& type : types) {
          if (type.mask == 0) continue;
          const auto& per_group = by_mask.at(type.mask);
          std::size_t next = 0;
          for (int g = 0; g < k; ++g) {
            for (int c = 0; c < per_group[g]; ++c) groups[g].push_back(type.members[next++]);
          }
        }
        // Agents without friends fill the remaining room.
        if (!types.empty() && types.front().mask == 0) {
          std::size_t next = 0;
          for (int g = 0; g < k; ++g) {
            while (static_cast<int>(groups[g].size()) < frame.sizes[g]) groups[g].push_back(types.front().members[next++]);
          }
        }
        std::vector<PartIndex> part(static_cast<std::size_t>(inst.n()), -1);
        std::vector<int> order(static_cast<std::size_t>(k));
        for (int g = 0; g < k; ++g) order[g] = g;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frame.sizes[a] > frame.sizes[b]; });
        for (int idx = 0; idx < k; ++idx) {
          for (AgentId a : groups[order[idx]]) part[a] = idx;
        }
        result.partition = Partition(std::move(part), k);
        return false;
      }
      return true;
    };
    if (u == 0) {
      try_blocks({});
    } else {
      detail::for_each_set_partition(result.cover, l, try_blocks);
    }
    if (result.partition) break;
  }
  return result;
}

}  // namespace fairpart
