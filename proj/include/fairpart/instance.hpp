#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairpart/decomposition.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/utilities.hpp"

namespace fairpart {

struct Instance {
  FriendshipGraph graph;
  UtilityProfile utilities;
  int k = 1;
  SizeVector sizes;
  std::optional<NiceTreeDecomposition> decomposition;

  int n() const { return graph.n(); }
};

/// Builds an instance from explicit weights; `sizes` defaults to balanced.
inline Instance make_instance(int n, int k, const std::map<std::pair<AgentId, AgentId>, Weight>& weights,
                              std::optional<SizeVector> sizes = std::nullopt) {
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (const auto& [pair, w] : weights) {
    auto [a, b] = pair;
    if (a < b || !weights.count({b, a})) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Instance inst;
  inst.graph = FriendshipGraph(n, edges);
  inst.utilities = UtilityProfile(inst.graph, weights);
  inst.k = k;
  inst.sizes = sizes ? *sizes : SizeVector::balanced(n, k);
  if (inst.sizes.k() != k) throw InvalidInput("size mismatch");
  if (inst.sizes.total() != n) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  return inst;
}

inline Instance make_binary_instance(int n, int k, const std::vector<std::pair<AgentId, AgentId>>& edges,
                                     std::optional<SizeVector> sizes = std::nullopt) {
  Instance inst;
  inst.graph = FriendshipGraph(n, edges);
  inst.utilities = UtilityProfile::binary(inst.graph);
  inst.k = k;
  inst.sizes = sizes ? *sizes : SizeVector::balanced(n, k);
  if (inst.sizes.k() != k) throw InvalidInput("size mismatch");
  if (inst.sizes.total() != n) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  return inst;
}

/// Copy of `inst` with a different part count or size vector.
inline Instance with_sizes(const Instance& inst, const SizeVector& sizes) {
  if (sizes.total() != inst.n()) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  Instance out = inst;
  out.k = sizes.k();
  out.sizes = sizes;
  return out;
}

namespace detail {

inline std::vector<std::string> tokenize_lines(std::istream& in, std::vector<int>& line_of) {
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      // Braces may be glued to neighbouring tokens.
      std::size_t start = 0;
      for (std::size_t i = 0; i <= tok.size(); ++i) {
        if (i == tok.size() || tok[i] == '{' || tok[i] == '}') {
          if (i > start) {
            tokens.push_back(tok.substr(start, i - start));
            line_of.push_back(number);
          }
          if (i < tok.size()) {
            tokens.emplace_back(1, tok[i]);
            line_of.push_back(number);
          }
          start = i + 1;
        }
      }
    }
  }
  return tokens;
}

inline long long parse_int(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(std::string("expected integer for ") + what + ", got '" + tok + "'");
  }
}

}  // namespace detail

/// Reads the `fairpart v1` text format.
inline Instance parse_instance(std::istream& in) {
  std::vector<int> line_of;
  auto tokens = detail::tokenize_lines(in, line_of);
  std::size_t pos = 0;
  auto at_end = [&] { return pos >= tokens.size(); };
  auto next = [&](const char* what) -> const std::string& {
    if (at_end()) throw InvalidInput(std::string("unexpected end of input, expected ") + what);
    return tokens[pos++];
  };
  auto is_keyword = [](const std::string& t) {
    return t == "agents" || t == "parts" || t == "sizes" || t == "edge" || t == "td";
  };

  if (next("header") != "fairpart" || next("version") != "v1") {
    throw InvalidInput("missing header 'fairpart v1'");
  }
  int n = -1;
  int k = -1;
  std::optional<std::vector<int>> sizes;
  std::map<std::pair<AgentId, AgentId>, Weight> weights;
  std::vector<std::pair<AgentId, AgentId>> edges;
  std::optional<std::vector<TdNode>> td_nodes;

  while (!at_end()) {
    const std::string& key = next("keyword");
    if (key == "agents") {
      n = static_cast<int>(detail::parse_int(next("agent count"), "agent count"));
      if (n < 1) throw InvalidInput("agent count must be positive");
    } else if (key == "parts") {
      k = static_cast<int>(detail::parse_int(next("part count"), "part count"));
      if (k < 1) throw InvalidInput("part count must be positive");
    } else if (key == "sizes") {
      std::vector<int> s;
      while (!at_end() && !is_keyword(tokens[pos])) {
        s.push_back(static_cast<int>(detail::parse_int(tokens[pos++], "size")));
      }
      sizes = std::move(s);
    } else if (key == "edge") {
      if (n < 0) throw InvalidInput("edge before agent count");
      int line = line_of[pos - 1];
      std::vector<long long> nums;
      while (!at_end() && line_of[pos] == line && !is_keyword(tokens[pos])) {
        nums.push_back(detail::parse_int(tokens[pos++], "edge field"));
      }
      if (nums.size() != 3 && nums.size() != 4) {
        throw InvalidInput("edge line " + std::to_string(line) + " needs 'edge a b w_ab [w_ba]'");
      }
      auto a = static_cast<AgentId>(nums[0]);
      auto b = static_cast<AgentId>(nums[1]);
      Weight wab = nums[2];
      Weight wba = nums.size() == 4 ? nums[3] : nums[2];
      if (wab == 0 || wba == 0) {
        throw InvalidInput("zero weight on edge " + std::to_string(a) + " " + std::to_string(b));
      }
      if (wab < 0 || wba < 0) {
        throw InvalidInput("negative weight on edge " + std::to_string(a) + " " + std::to_string(b));
      }
      if (weights.count({a, b})) {
        throw InvalidInput("duplicate edge " + std::to_string(a) + " " + std::to_string(b));
      }
      weights[{a, b}] = wab;
      weights[{b, a}] = wba;
      edges.emplace_back(a, b);
    } else if (key == "td") {
      if (next("'{'") != "{") throw InvalidInput("expected '{' after td");
      std::vector<TdNode> nodes;
      std::map<long long, int> position;
      std::vector<std::pair<std::size_t, long long>> parent_refs;
      while (true) {
        const std::string& t = next("'}' or node");
        if (t == "}") break;
        if (t != "node") throw InvalidInput("expected 'node' in td block, got '" + t + "'");
        TdNode node;
        long long id = detail::parse_int(next("node id"), "node id");
        if (position.count(id)) throw InvalidInput("duplicate td node " + std::to_string(id));
        node.id = static_cast<int>(id);
        if (next("kind") != "kind") throw InvalidInput("expected 'kind' in td node");
        const std::string& kind = next("node kind");
        if (kind == "leaf") {
          node.kind = NodeKind::Leaf;
        } else if (kind == "join") {
          node.kind = NodeKind::Join;
        } else if (kind == "introduce" || kind == "forget") {
          node.kind = kind == "introduce" ? NodeKind::Introduce : NodeKind::Forget;
          node.agent = static_cast<AgentId>(detail::parse_int(next("agent"), "td agent"));
        } else {
          throw InvalidInput("unknown td node kind '" + kind + "'");
        }
        if (next("parent") != "parent") throw InvalidInput("expected 'parent' in td node");
        const std::string& parent = next("parent id");
        parent_refs.emplace_back(nodes.size(), parent == "none" ? -1 : detail::parse_int(parent, "parent id"));
        if (next("bag") != "bag") throw InvalidInput("expected 'bag' in td node");
        while (!at_end() && tokens[pos] != "node" && tokens[pos] != "}") {
          node.bag.push_back(static_cast<AgentId>(detail::parse_int(tokens[pos++], "bag agent")));
        }
        position[id] = static_cast<int>(nodes.size());
        nodes.push_back(std::move(node));
      }
      for (auto [idx, ref] : parent_refs) {
        if (ref == -1) {
          nodes[idx].parent = -1;
        } else {
          auto it = position.find(ref);
          if (it == position.end()) throw InvalidInput("unknown parent node " + std::to_string(ref));
          nodes[idx].parent = it->second;
        }
      }
      td_nodes = std::move(nodes);
    } else {
      throw InvalidInput("unknown keyword '" + key + "'");
    }
  }
  if (n < 0) throw InvalidInput("missing 'agents' line");
  if (k < 0) throw InvalidInput("missing 'parts' line");
  if (k > n) throw InvalidInput("more parts than agents");

  Instance inst;
  inst.graph = FriendshipGraph(n, edges);
  inst.utilities = UtilityProfile(inst.graph, weights);
  inst.k = k;
  if (sizes) {
    if (static_cast<int>(sizes->size()) != k) throw InvalidInput("size mismatch: sizes list has wrong length");
    inst.sizes = SizeVector(*sizes);
    if (inst.sizes.total() != n) throw InvalidInput("size mismatch: sizes do not sum to agent count");
  } else {
    inst.sizes = SizeVector::balanced(n, k);
  }
  if (td_nodes) {
    NiceTreeDecomposition td(std::move(*td_nodes));
    if (auto err = td.verify(inst.graph)) throw InvalidInput("invalid tree decomposition: " + *err);
    inst.decomposition = std::move(td);
  }
  return inst;
}

inline Instance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_instance(in);
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  out << "fairpart v1\n";
  out << "agents " << inst.n() << "\n";
  out << "parts " << inst.k << "\n";
  if (!(inst.sizes == SizeVector::balanced(inst.n(), inst.k))) {
    out << "sizes";
    for (int s : inst.sizes.values()) out << ' ' << s;
    out << "\n";
  }
  for (auto [a, b] : inst.graph.edges()) {
    Weight wab = inst.utilities.weight(a, b);
    Weight wba = inst.utilities.weight(b, a);
    out << "edge " << a << ' ' << b << ' ' << wab;
    if (wba != wab) out << ' ' << wba;
    out << "\n";
  }
  if (inst.decomposition) {
    const auto& td = *inst.decomposition;
    out << "td {\n";
    for (const auto& node : td.nodes()) {
      out << "node " << node.id << " kind " << to_string(node.kind);
      if (node.kind == NodeKind::Introduce || node.kind == NodeKind::Forget) out << ' ' << node.agent;
      out << " parent ";
      if (node.parent == -1) {
        out << "none";
      } else {
        out << td.node(node.parent).id;
      }
      out << " bag";
      for (AgentId a : node.bag) out << ' ' << a;
      out << "\n";
    }
    out << "}\n";
  }
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

/// Partition file: `fairpart-partition v1`, `parts k`, then `part i a...` lines.
inline void write_partition(std::ostream& out, const Partition& p) {
  out << "fairpart-partition v1\n";
  out << "parts " << p.k() << "\n";
  for (PartIndex i = 0; i < p.k(); ++i) {
    out << "part " << i;
    for (AgentId a : p.members(i)) out << ' ' << a;
    out << "\n";
  }
}

inline std::string serialize_partition(const Partition& p) {
  std::ostringstream out;
  write_partition(out, p);
  return out.str();
}

inline Partition parse_partition(std::istream& in, int n) {
  std::vector<int> line_of;
  auto tokens = detail::tokenize_lines(in, line_of);
  if (tokens.size() < 4 || tokens[0] != "fairpart-partition" || tokens[1] != "v1" || tokens[2] != "parts") {
    throw InvalidInput("missing header 'fairpart-partition v1' / 'parts k'");
  }
  int k = static_cast<int>(detail::parse_int(tokens[3], "part count"));
  if (k < 1) throw InvalidInput("part count must be positive");
  std::vector<std::vector<AgentId>> parts(static_cast<std::size_t>(k));
  std::size_t pos = 4;
  while (pos < tokens.size()) {
    if (tokens[pos] != "part") throw InvalidInput("expected 'part', got '" + tokens[pos] + "'");
    ++pos;
    if (pos >= tokens.size()) throw InvalidInput("part line without index");
    long long idx = detail::parse_int(tokens[pos++], "part index");
    if (idx < 0 || idx >= k) throw InvalidInput("part index out of range");
    while (pos < tokens.size() && tokens[pos] != "part") {
      parts[idx].push_back(static_cast<AgentId>(detail::parse_int(tokens[pos++], "agent")));
    }
  }
  return Partition::from_parts(parts, n);
}

inline Partition load_partition(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_partition(in, n);
}

}  // namespace fairpart
