#pragma once

// Helpers shared by the unit tests. Generators here are deliberately independent of the
// library's own instance forge.

#include <map>
#include <random>
#include <vector>

#include "fairpart/instance.hpp"

namespace fairpart::testing {

/// G(n, p) with weights uniform in [1, wmax] per direction. k = 0 picks k in [1, min(3, n)].
inline Instance random_instance(std::mt19937_64& rng, int n, int wmax, double p, int k = 0) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> weight(1, wmax);
  std::map<std::pair<AgentId, AgentId>, Weight> w;
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b = a + 1; b < n; ++b) {
      if (edge(rng)) {
        w[{a, b}] = weight(rng);
        w[{b, a}] = weight(rng);
      }
    }
  }
  if (k == 0) k = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(3, n)));
  k = std::min(k, n);
  return make_instance(n, k, w);
}

/// Uniform random labelled tree (random attachment then relabelling) with optional extra roots.
inline std::vector<std::pair<AgentId, AgentId>> random_forest_edges(std::mt19937_64& rng, int n, int trees = 1) {
  std::vector<AgentId> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<AgentId, AgentId>> edges;
  for (int i = 1; i < n; ++i) {
    if (i < trees) continue;
    AgentId parent = static_cast<AgentId>(rng() % static_cast<unsigned>(i));
    edges.emplace_back(perm[i], perm[parent]);
  }
  return edges;
}

inline Instance weighted_from_edges(std::mt19937_64& rng, int n, int k,
                                    const std::vector<std::pair<AgentId, AgentId>>& edges, int wmax) {
  std::uniform_int_distribution<int> weight(1, wmax);
  std::map<std::pair<AgentId, AgentId>, Weight> w;
  for (auto [a, b] : edges) {
    w[{a, b}] = weight(rng);
    w[{b, a}] = weight(rng);
  }
  return make_instance(n, k, w);
}

}  // namespace fairpart::testing
