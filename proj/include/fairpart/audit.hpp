#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fairpart/instance.hpp"

namespace fairpart {

/// Per-agent shares for the share notions. PROP needs only k; MMS values are optional
/// because computing them exactly is expensive.
struct ShareTable {
  int k = 1;
  std::optional<std::vector<Weight>> mms;
};

/// a envies the part of `envied`: `target` is u_a(pi(envied) \ {envied}) and `own` is u_a(pi(a)).
/// `blocking` lists the removal candidates that fail to remove the envy (empty for EF).
struct EnvyWitness {
  AgentId envied = -1;
  Weight own = 0;
  Weight target = 0;
  std::vector<AgentId> blocking;
};

/// PROP share is numerator/denominator; MMS share has denominator 1.
struct ShareWitness {
  Weight numerator = 0;
  Weight denominator = 1;
  Weight utility = 0;
};

struct AgentVerdict {
  AgentId agent = -1;
  bool pass = true;
  std::variant<std::monostate, EnvyWitness, ShareWitness> witness;
};

struct AuditReport {
  FairnessNotion notion = FairnessNotion::EF;
  std::vector<AgentVerdict> verdicts;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const AgentVerdict& v) { return v.pass; });
  }
  const AgentVerdict* first_failure() const {
    for (const auto& v : verdicts) {
      if (!v.pass) return &v;
    }
    return nullptr;
  }
};

/// u_a(pi(a)).
inline Weight own_utility(const UtilityProfile& u, const Partition& p, AgentId a) {
  Weight sum = 0;
  auto fr = u.friends(a);
  auto w = u.weights(a);
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (p.part_of(fr[i]) == p.part_of(a)) sum += w[i];
  }
  return sum;
}

/// Pairwise check straight from the definitions. nullopt when a does not violate `notion` towards b.
inline std::optional<EnvyWitness> envious(const UtilityProfile& u, const Partition& p, AgentId a, AgentId b,
                                          FairnessNotion notion) {
  if (!is_envy_notion(notion)) throw InvalidInput("envious() takes an envy notion");
  if (a == b) return std::nullopt;
  Weight own = 0;
  for (AgentId c : p.members(p.part_of(a))) own += u.weight(a, c);
  std::vector<AgentId> rest;
  Weight target = 0;
  for (AgentId c : p.members(p.part_of(b))) {
    if (c == b) continue;
    rest.push_back(c);
    target += u.weight(a, c);
  }
  EnvyWitness w{b, own, target, {}};
  switch (notion) {
    case FairnessNotion::EF:
      if (own < target) return w;
      return std::nullopt;
    case FairnessNotion::EFX0:
    case FairnessNotion::EFX:
      for (AgentId c : rest) {
        if (notion == FairnessNotion::EFX && u.weight(a, c) == 0) continue;
        if (own < target - u.weight(a, c)) w.blocking.push_back(c);
      }
      if (w.blocking.empty()) return std::nullopt;
      return w;
    case FairnessNotion::EF1:
      if (rest.empty()) return std::nullopt;
      for (AgentId c : rest) {
        if (own >= target - u.weight(a, c)) return std::nullopt;
      }
      w.blocking = rest;
      return w;
    default:
      break;
  }
  return std::nullopt;
}

/// Envy test from friend counts under binary utilities. `own` friends in a's part,
/// `x` friends in another part of final size `m`.
constexpr bool binary_envy_ok(FairnessNotion notion, int own, int x, int m) {
  const int nonfriends = m - x;
  int slack = 0;
  switch (notion) {
    case FairnessNotion::EF: slack = nonfriends >= 1 ? 0 : 1; break;
    case FairnessNotion::EFX0: slack = nonfriends >= 2 ? 0 : (nonfriends == 1 ? 1 : 2); break;
    case FairnessNotion::EFX:
    case FairnessNotion::EF1: slack = nonfriends >= 1 ? 1 : 2; break;
    default: return true;
  }
  return own >= x - slack;
}

/// Binary MMS share for `degree` friends under an arbitrary size vector: the best
/// min-part friend count, with the agent itself occupying a slot in one part.
inline int binary_mms_share(int degree, const SizeVector& sv) {
  const int k = sv.k();
  int best = 0;
  for (int p = 0; p < k; ++p) {
    if (p > 0 && sv.at(p) == sv.at(p - 1)) continue;
    int t = degree / k;
    for (int i = 0; i < k; ++i) t = std::min(t, i == p ? sv.at(i) - 1 : sv.at(i));
    best = std::max(best, t);
  }
  return best;
}

namespace detail {

struct FriendInPart {
  PartIndex part;
  AgentId id;
  Weight w;
};

/// Fast envy evaluation for agent a. Aggregates friends per part so cost is O(deg(a) log deg(a))
/// plus a scan for the smallest non-friend when a failure needs it.
inline std::optional<EnvyWitness> envy_failure(const UtilityProfile& u, const Partition& p, AgentId a,
                                               FairnessNotion notion, bool want_witness) {
  auto fr = u.friends(a);
  auto ws = u.weights(a);
  const PartIndex mine = p.part_of(a);
  Weight own = 0;
  std::vector<FriendInPart> others;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    PartIndex q = p.part_of(fr[i]);
    if (q == mine) {
      own += ws[i];
    } else {
      others.push_back({q, fr[i], ws[i]});
    }
  }
  std::stable_sort(others.begin(), others.end(),
                   [](const FriendInPart& x, const FriendInPart& y) { return x.part < y.part; });

  AgentId worst = std::numeric_limits<AgentId>::max();
  for (std::size_t lo = 0; lo < others.size();) {
    std::size_t hi = lo;
    Weight sum = 0;
    while (hi < others.size() && others[hi].part == others[lo].part) sum += others[hi++].w;
    const PartIndex q = others[lo].part;
    const int f = static_cast<int>(hi - lo);
    const int m = p.size(q);
    const int r = m - f;
    // Two smallest and two largest friend weights with their positions.
    std::size_t min1 = lo, min2 = hi, max1 = lo, max2 = hi;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      if (others[i].w < others[min1].w) {
        min2 = min1;
        min1 = i;
      } else if (min2 == hi || others[i].w < others[min2].w) {
        min2 = i;
      }
      if (others[i].w > others[max1].w) {
        max2 = max1;
        max1 = i;
      } else if (max2 == hi || others[i].w > others[max2].w) {
        max2 = i;
      }
    }
    auto min_except = [&](std::size_t skip) -> std::optional<Weight> {
      std::size_t at = skip == min1 ? min2 : min1;
      if (at == hi) return std::nullopt;
      return others[at].w;
    };
    auto max_except = [&](std::size_t skip) -> std::optional<Weight> {
      std::size_t at = skip == max1 ? max2 : max1;
      if (at == hi) return std::nullopt;
      return others[at].w;
    };

    // Envied agent b is a friend (index i) or a non-friend (i == hi).
    auto fails = [&](std::size_t i) -> bool {
      const bool friend_b = i != hi;
      const Weight target = friend_b ? sum - others[i].w : sum;
      const int rest_size = m - 1;
      const int rest_nonfriends = friend_b ? r : r - 1;
      switch (notion) {
        case FairnessNotion::EF: return own < target;
        case FairnessNotion::EFX0: {
          if (rest_size == 0) return false;
          Weight drop = 0;
          if (rest_nonfriends == 0) drop = friend_b ? *min_except(i) : others[min1].w;
          return own < target - drop;
        }
        case FairnessNotion::EFX: {
          auto drop = friend_b ? min_except(i) : std::optional<Weight>(others[min1].w);
          if (!drop) return false;
          return own < target - *drop;
        }
        case FairnessNotion::EF1: {
          if (rest_size == 0) return false;
          auto drop = friend_b ? max_except(i) : std::optional<Weight>(others[max1].w);
          return own < target - drop.value_or(0);
        }
        default: return false;
      }
    };

    for (std::size_t i = lo; i < hi; ++i) {
      if (fails(i)) {
        worst = std::min(worst, others[i].id);
        break;  // friends are in ascending id order within a part
      }
    }
    if (r >= 1 && fails(hi)) {
      // Smallest non-friend member of part q.
      std::size_t fi = lo;
      for (AgentId c : p.members(q)) {
        while (fi < hi && others[fi].id < c) ++fi;
        if (fi < hi && others[fi].id == c) continue;
        worst = std::min(worst, c);
        break;
      }
    }
    lo = hi;
  }
  if (worst == std::numeric_limits<AgentId>::max()) return std::nullopt;
  if (!want_witness) return EnvyWitness{worst, own, 0, {}};
  return envious(u, p, a, worst, notion);
}

}  // namespace detail

/// Verdict for one agent.
inline AgentVerdict audit_agent(const Instance& inst, const Partition& p, AgentId a, FairnessNotion notion,
                                const ShareTable& shares, bool want_witness = true) {
  AgentVerdict v;
  v.agent = a;
  if (is_envy_notion(notion)) {
    if (auto w = detail::envy_failure(inst.utilities, p, a, notion, want_witness)) {
      v.pass = false;
      v.witness = std::move(*w);
    }
    return v;
  }
  Weight own = own_utility(inst.utilities, p, a);
  if (notion == FairnessNotion::PROP) {
    ShareWitness w{inst.utilities.total(a), shares.k, own};
    v.pass = own * shares.k >= w.numerator;
    v.witness = w;
  } else {
    if (!shares.mms) throw InvalidInput("MMS audit requires MMS shares");
    ShareWitness w{(*shares.mms)[a], 1, own};
    v.pass = own >= w.numerator;
    v.witness = w;
  }
  return v;
}

inline AuditReport check_partition(const Instance& inst, const Partition& p, FairnessNotion notion,
                                   const ShareTable& shares) {
  // Size validity is the caller's concern; audits also run on partitions of other size vectors.
  if (p.n() != inst.n()) throw InvalidInput("agent count mismatch");
  AuditReport report;
  report.notion = notion;
  report.verdicts.reserve(static_cast<std::size_t>(inst.n()));
  for (AgentId a = 0; a < inst.n(); ++a) report.verdicts.push_back(audit_agent(inst, p, a, notion, shares));
  return report;
}

/// Early-exit yes/no audit.
inline bool is_fair(const Instance& inst, const Partition& p, FairnessNotion notion, const ShareTable& shares) {
  for (AgentId a = 0; a < inst.n(); ++a) {
    if (!audit_agent(inst, p, a, notion, shares, false).pass) return false;
  }
  return true;
}

/// Binary closed form floor(deg(a)/k). Requires binary utilities and balanced sizes.
inline Weight mms_share_binary(const Instance& inst, AgentId a) {
  if (!inst.utilities.is_binary()) throw NotApplicable("binary MMS share needs binary utilities");
  if (!inst.sizes.is_balanced()) throw NotApplicable("binary MMS share needs balanced sizes");
  return inst.graph.degree(a) / inst.k;
}

inline void write_verdict(std::ostream& out, FairnessNotion notion, const AgentVerdict& v) {
  out << "agent " << v.agent << ' ' << to_string(notion) << ' ' << (v.pass ? "pass" : "fail");
  if (const auto* e = std::get_if<EnvyWitness>(&v.witness)) {
    out << " envies " << e->envied << " own " << e->own << " target " << e->target << " blocking ";
    if (e->blocking.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < e->blocking.size(); ++i) out << (i ? "," : "") << e->blocking[i];
    }
  } else if (const auto* s = std::get_if<ShareWitness>(&v.witness)) {
    out << " share " << s->numerator;
    if (s->denominator != 1) out << '/' << s->denominator;
    out << " utility " << s->utility;
  }
  out << '\n';
}

inline void write_report(std::ostream& out, const AuditReport& r) {
  for (const auto& v : r.verdicts) write_verdict(out, r.notion, v);
}

inline std::string serialize_report(const AuditReport& r) {
  std::ostringstream out;
  write_report(out, r);
  return out.str();
}

}  // namespace fairpart
