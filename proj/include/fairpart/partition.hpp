#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fairpart/types.hpp"

namespace fairpart {

/// Target part sizes, stored non-increasing. Part i of a solver's output has size at(i).
class SizeVector {
 public:
  SizeVector() = default;

  explicit SizeVector(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InvalidInput("size vector is empty");
    for (int s : sizes_) {
      if (s < 1) throw InvalidInput("empty part in size vector");
    }
    std::sort(sizes_.begin(), sizes_.end(), std::greater<>());
  }

  /// ceil(n/k) entries first, then floor(n/k).
  static SizeVector balanced(int n, int k) {
    if (k < 1) throw InvalidInput("part count must be positive");
    if (k > n) throw InvalidInput("more parts than agents");
    std::vector<int> sizes(static_cast<std::size_t>(k), n / k);
    for (int i = 0; i < n % k; ++i) ++sizes[i];
    return SizeVector(std::move(sizes));
  }

  int k() const { return static_cast<int>(sizes_.size()); }
  int at(int i) const { return sizes_[i]; }
  int total() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }
  int max() const { return sizes_.front(); }
  int min() const { return sizes_.back(); }
  bool is_balanced() const { return max() - min() <= 1; }
  const std::vector<int>& values() const { return sizes_; }

  bool operator==(const SizeVector&) const = default;

 private:
  std::vector<int> sizes_;
};

/// Assignment of every agent to one of k labelled parts.
class Partition {
 public:
  Partition() = default;

  Partition(std::vector<PartIndex> part_of, int k) : part_of_(std::move(part_of)), k_(k) {
    if (k < 1) throw InvalidInput("part count must be positive");
    members_.resize(static_cast<std::size_t>(k));
    for (std::size_t a = 0; a < part_of_.size(); ++a) {
      PartIndex p = part_of_[a];
      if (p < 0 || p >= k) {
        throw InvalidInput("agent " + std::to_string(a) + " assigned to part out of range");
      }
      members_[p].push_back(static_cast<AgentId>(a));
    }
  }

  static Partition from_parts(const std::vector<std::vector<AgentId>>& parts, int n) {
    std::vector<PartIndex> part_of(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (AgentId a : parts[i]) {
        if (a < 0 || a >= n) throw InvalidInput("agent out of range: " + std::to_string(a));
        if (part_of[a] != -1) throw InvalidInput("agent in two parts: " + std::to_string(a));
        part_of[a] = static_cast<PartIndex>(i);
      }
    }
    for (int a = 0; a < n; ++a) {
      if (part_of[a] == -1) throw InvalidInput("agent not covered: " + std::to_string(a));
    }
    return Partition(std::move(part_of), static_cast<int>(parts.size()));
  }

  int n() const { return static_cast<int>(part_of_.size()); }
  int k() const { return k_; }
  PartIndex part_of(AgentId a) const { return part_of_[a]; }
  const std::vector<PartIndex>& assignment() const { return part_of_; }
  /// Members of part i, ascending.
  const std::vector<AgentId>& members(PartIndex i) const { return members_[i]; }
  int size(PartIndex i) const { return static_cast<int>(members_[i].size()); }

  bool operator==(const Partition& o) const { return k_ == o.k_ && part_of_ == o.part_of_; }

 private:
  std::vector<PartIndex> part_of_;
  std::vector<std::vector<AgentId>> members_;
  int k_ = 0;
};

/// nullopt when p covers n agents with part sizes equal to sv as multisets.
inline std::optional<std::string> validate_partition(const Partition& p, int n, const SizeVector& sv) {
  if (p.n() != n) return "agent count mismatch";
  for (PartIndex i = 0; i < p.k(); ++i) {
    if (p.size(i) == 0) return "empty part";
  }
  if (p.k() != sv.k()) return "size mismatch";
  std::vector<int> sizes;
  for (PartIndex i = 0; i < p.k(); ++i) sizes.push_back(p.size(i));
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  if (sizes != sv.values()) return "size mismatch";
  return std::nullopt;
}

}  // namespace fairpart
