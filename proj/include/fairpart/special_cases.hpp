#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "fairpart/instance.hpp"

namespace fairpart {

namespace detail {

/// Part i takes the next sv.at(i) agents of `order`.
inline Partition fill_in_order(const std::vector<AgentId>& order, const SizeVector& sv) {
  std::vector<PartIndex> part(order.size(), -1);
  std::size_t next = 0;
  for (PartIndex i = 0; i < sv.k(); ++i) {
    for (int t = 0; t < sv.at(i); ++t) part[order[next++]] = i;
  }
  return Partition(std::move(part), sv.k());
}

inline std::vector<AgentId> identity_order(int n) {
  std::vector<AgentId> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  return order;
}

}  // namespace detail

/// With more parts than the maximum degree every share is 0, so any partition is MMS.
inline Partition mms_when_parts_exceed_degree(const Instance& inst) {
  if (inst.k <= inst.graph.max_degree()) throw NotApplicable("number of parts does not exceed the maximum degree");
  return detail::fill_in_order(detail::identity_order(inst.n()), inst.sizes);
}

/// Center of a star plus isolated agents, or nullopt if the vertex cover number is not 1.
inline std::optional<AgentId> star_center(const FriendshipGraph& g) {
  const auto edges = g.edges();
  if (edges.empty()) return std::nullopt;
  for (AgentId candidate : {edges[0].first, edges[0].second}) {
    if (g.degree(candidate) == g.edge_count()) return candidate;
  }
  return std::nullopt;
}

/// Decision for graphs with vertex cover number 1. EF, EFX0 and PROP require at least 3
/// agents in every part.
inline std::optional<Partition> vc1_decide(const Instance& inst, FairnessNotion notion) {
  const auto center = star_center(inst.graph);
  if (!center) throw NotApplicable("vertex cover number is not 1");
  const SizeVector& sv = inst.sizes;
  const int n = inst.n();
  if (sv.k() == 1) return Partition(std::vector<PartIndex>(static_cast<std::size_t>(n), 0), 1);

  std::vector<AgentId> leaves(inst.graph.friends(*center).begin(), inst.graph.friends(*center).end());
  std::vector<AgentId> isolated;
  for (AgentId a = 0; a < n; ++a) {
    if (a != *center && inst.graph.degree(a) == 0) isolated.push_back(a);
  }
  int with_center = 0;
  switch (notion) {
    case FairnessNotion::EF:
    case FairnessNotion::EFX0:
    case FairnessNotion::PROP:
      if (sv.min() < 3) throw NotApplicable("vertex cover 1 rule needs at least 3 agents per part");
      if (static_cast<int>(leaves.size()) + 1 > sv.at(0)) return std::nullopt;
      with_center = static_cast<int>(leaves.size());
      break;
    default:
      // The center's most valuable leaves, ties to the smaller id.
      std::stable_sort(leaves.begin(), leaves.end(), [&](AgentId a, AgentId b) {
        return inst.utilities.weight(*center, a) > inst.utilities.weight(*center, b);
      });
      with_center = std::min(static_cast<int>(leaves.size()), sv.at(0) - 1);
      break;
  }
  std::vector<AgentId> order{*center};
  order.insert(order.end(), leaves.begin(), leaves.begin() + with_center);
  std::vector<AgentId> rest(leaves.begin() + with_center, leaves.end());
  // Isolated agents top up the center's part before the remaining leaves.
  std::size_t iso = 0;
  while (static_cast<int>(order.size()) < sv.at(0) && iso < isolated.size()) order.push_back(isolated[iso++]);
  rest.insert(rest.end(), isolated.begin() + static_cast<std::ptrdiff_t>(iso), isolated.end());
  std::sort(rest.begin(), rest.end());
  order.insert(order.end(), rest.begin(), rest.end());
  return detail::fill_in_order(order, sv);
}

/// Linear-time decision for binary paths with balanced sizes: EF, PROP and EFX0.
inline std::optional<Partition> binary_path_decide(const Instance& inst, FairnessNotion notion) {
  if (!inst.utilities.is_binary()) throw NotApplicable("path rule requires binary utilities");
  if (!is_path(inst.graph)) throw NotApplicable("graph is not a path");
  if (!inst.sizes.is_balanced()) throw NotApplicable("path rule requires balanced sizes");
  const SizeVector& sv = inst.sizes;
  switch (notion) {
    case FairnessNotion::PROP:
      if (inst.n() >= 2 && sv.min() == 1) return std::nullopt;
      break;
    case FairnessNotion::EF:
      if (sv.min() == 1 && sv.max() >= 2) return std::nullopt;
      break;
    case FairnessNotion::EFX0: break;
    default: throw NotApplicable("path rule covers EF, EFX0 and PROP only");
  }
  return detail::fill_in_order(path_order(inst.graph), sv);
}

}  // namespace fairpart
