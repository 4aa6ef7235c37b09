#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fairpart/forest_solver.hpp"
#include "fairpart/oracle.hpp"
#include "fairpart/special_cases.hpp"
#include "fairpart/treewidth_dp.hpp"
#include "fairpart/vertex_cover.hpp"

namespace fairpart {

enum class Method { Auto, Special, Forest, Twdp, Vc, Oracle };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Special: return "special";
    case Method::Forest: return "forest";
    case Method::Twdp: return "twdp";
    case Method::Vc: return "vc";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view text) {
  for (Method m : {Method::Auto, Method::Special, Method::Forest, Method::Twdp, Method::Vc, Method::Oracle}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

struct SolveOptions {
  int limit = oracle_limit();
  DpOptions dp;
  VcOptions vc;
};

struct SolveOutcome {
  std::optional<Partition> partition;
  Method method = Method::Oracle;
  std::string source;      ///< Rule or solver that produced the answer.
  std::string work_label;  ///< Unit of `work`: signatures, frames, partitions or moves.
  long long work = 0;
};

/// Shares for auditing against `sv`. MMS shares use the binary closed form where it applies,
/// zero when an agent has fewer friends than parts, and exact enumeration over friends
/// otherwise (bounded by `limit` friends).
inline ShareTable audit_shares(const Instance& inst, const SizeVector& sv, bool with_mms, int limit = oracle_limit()) {
  ShareTable t;
  t.k = sv.k();
  if (!with_mms) return t;
  std::vector<Weight> mms(static_cast<std::size_t>(inst.n()));
  const bool binary = inst.utilities.is_binary();
  for (AgentId a = 0; a < inst.n(); ++a) {
    const int deg = inst.graph.degree(a);
    if (deg < sv.k()) {
      mms[a] = 0;
    } else if (binary) {
      mms[a] = binary_mms_share(deg, sv);
    } else if (deg <= limit) {
      mms[a] = mms_share_exact(inst, a, sv, std::max(limit, inst.n()));
    } else {
      throw ResourceLimit("MMS share of agent " + std::to_string(a) + " needs enumeration over " + std::to_string(deg) +
                          " friends (limit " + std::to_string(limit) + ")");
    }
  }
  t.mms = std::move(mms);
  return t;
}

namespace detail {

inline SolveOutcome run_special(const Instance& inst, FairnessNotion notion) {
  SolveOutcome out;
  out.method = Method::Special;
  if (notion == FairnessNotion::MMS && inst.k > inst.graph.max_degree()) {
    out.partition = mms_when_parts_exceed_degree(inst);
    out.source = "special:parts-exceed-degree";
    return out;
  }
  if (inst.sizes.is_balanced() && star_center(inst.graph)) {
    try {
      out.partition = vc1_decide(inst, notion);
      out.source = "special:vc1";
      return out;
    } catch (const NotApplicable&) {
    }
  }
  if (inst.utilities.is_binary() && is_path(inst.graph) && inst.sizes.is_balanced() &&
      (notion == FairnessNotion::EF || notion == FairnessNotion::EFX0 || notion == FairnessNotion::PROP)) {
    out.partition = binary_path_decide(inst, notion);
    out.source = "special:path";
    return out;
  }
  throw NotApplicable("no special case applies");
}

inline SolveOutcome run_forest(const Instance& inst, FairnessNotion notion) {
  if (!is_forest(inst.graph)) throw NotApplicable("forest solver needs an acyclic graph");
  if (notion != FairnessNotion::EFX && notion != FairnessNotion::EF1 && notion != FairnessNotion::MMS) {
    throw NotApplicable("forest solver guarantees EFX, EF1 and MMS only");
  }
  auto sol = solve_forest(inst.graph, inst.utilities, inst.sizes);
  SolveOutcome out;
  out.method = Method::Forest;
  out.source = "forest";
  out.work_label = "moves";
  out.work = sol.stats.moves;
  out.partition = std::move(sol.partition);
  return out;
}

inline SolveOutcome run_twdp(const Instance& inst, FairnessNotion notion, const DpOptions& options) {
  if (!inst.utilities.is_binary()) throw NotApplicable("treewidth DP requires binary utilities");
  const NiceTreeDecomposition td = decomposition_for(inst);
  TreewidthDp dp(inst, notion, inst.sizes, td, options);
  SolveOutcome out;
  out.method = Method::Twdp;
  out.source = "twdp";
  out.work_label = "signatures";
  out.work = static_cast<long long>(dp.stats().max_node_signatures);
  if (dp.found()) out.partition = dp.reconstruct();
  return out;
}

inline SolveOutcome run_vc(const Instance& inst, FairnessNotion notion, const VcOptions& options) {
  auto r = vc_solve(inst, notion, inst.sizes, options);
  SolveOutcome out;
  out.method = Method::Vc;
  out.source = "vc";
  out.work_label = "frames";
  out.work = r.frames;
  out.partition = std::move(r.partition);
  return out;
}

inline SolveOutcome run_oracle(const Instance& inst, FairnessNotion notion, int limit) {
  auto r = exists_fair(inst, notion, inst.sizes, limit);
  SolveOutcome out;
  out.method = Method::Oracle;
  out.source = "oracle";
  out.work_label = "partitions";
  out.work = r.enumerated;
  out.partition = std::move(r.partition);
  return out;
}

inline SolveOutcome run_method(const Instance& inst, FairnessNotion notion, Method method, const SolveOptions& options) {
  switch (method) {
    case Method::Special: return run_special(inst, notion);
    case Method::Forest: return run_forest(inst, notion);
    case Method::Twdp: return run_twdp(inst, notion, options.dp);
    case Method::Vc: return run_vc(inst, notion, options.vc);
    case Method::Oracle: return run_oracle(inst, notion, options.limit);
    case Method::Auto: break;
  }
  // Cheapest first. A resource cap on one method falls through to the next.
  std::optional<ResourceLimit> capped;
  for (Method m : {Method::Special, Method::Forest, Method::Twdp, Method::Vc, Method::Oracle}) {
    try {
      return run_method(inst, notion, m, options);
    } catch (const NotApplicable&) {
    } catch (const ResourceLimit& e) {
      if (!capped) capped = e;
    }
  }
  if (capped) throw *capped;
  throw NotApplicable("no method applies");
}

}  // namespace detail

/// Solves with the chosen method, then re-audits any partition before returning it. A failed
/// re-audit throws std::logic_error.
inline SolveOutcome solve(const Instance& inst, FairnessNotion notion, Method method = Method::Auto,
                          const SolveOptions& options = {}) {
  SolveOutcome out = detail::run_method(inst, notion, method, options);
  if (out.partition) {
    if (auto err = validate_partition(*out.partition, inst.n(), inst.sizes)) {
      throw std::logic_error(out.source + " emitted an invalid partition: " + *err);
    }
    const ShareTable shares = audit_shares(inst, inst.sizes, notion == FairnessNotion::MMS, options.limit);
    if (!is_fair(inst, *out.partition, notion, shares)) {
      throw std::logic_error(out.source + " emitted a partition that fails " + std::string(to_string(notion)));
    }
  }
  return out;
}

}  // namespace fairpart
