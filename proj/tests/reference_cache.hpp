#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "arsim/machine.hpp"

namespace arsim::testing {

// Reference set: ways remember their last touch time. The victim is found by
// descending a binary tree toward the half whose newest touch is older.
struct ReferenceSet {
  std::vector<std::optional<std::uint64_t>> lines;
  std::vector<std::uint64_t> stamp;

  explicit ReferenceSet(std::size_t ways) : lines(ways), stamp(ways, 0) {}

  std::uint64_t newest(std::size_t lo, std::size_t hi) const {
    return *std::max_element(stamp.begin() + static_cast<long>(lo), stamp.begin() + static_cast<long>(hi));
  }

  std::size_t victim() const {
    std::size_t lo = 0;
    std::size_t hi = lines.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (newest(lo, mid) < newest(mid, hi)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return lo;
  }
};

// Naive hierarchy: per level, a list of sets scanned linearly.
struct ReferenceHierarchy {
  std::uint64_t line_size;
  std::vector<std::uint64_t> sets_per_level;
  std::vector<std::vector<ReferenceSet>> levels;
  std::uint64_t clock = 0;

  explicit ReferenceHierarchy(const std::vector<CacheLevelConfig>& cfg) : line_size(cfg.front().line_size) {
    for (const auto& c : cfg) {
      std::uint64_t sets = c.total_size / (c.associativity * c.line_size);
      sets_per_level.push_back(sets);
      levels.emplace_back(sets, ReferenceSet(c.associativity));
    }
  }

  ReferenceSet& set_for(std::size_t level, std::uint64_t line) {
    return levels[level][(line / line_size) % sets_per_level[level]];
  }

  std::size_t access(std::uint64_t line) {
    ++clock;
    std::size_t hit = levels.size();
    for (std::size_t l = 0; l < levels.size(); ++l) {
      auto& s = set_for(l, line);
      auto it = std::find(s.lines.begin(), s.lines.end(), line);
      if (it != s.lines.end()) {
        s.stamp[static_cast<std::size_t>(it - s.lines.begin())] = clock;
        hit = l;
        break;
      }
    }
    for (std::size_t l = 0; l < hit; ++l) {
      auto& s = set_for(l, line);
      auto empty = std::find(s.lines.begin(), s.lines.end(), std::nullopt);
      std::size_t way = empty != s.lines.end() ? static_cast<std::size_t>(empty - s.lines.begin()) : s.victim();
      s.lines[way] = line;
      s.stamp[way] = clock;
    }
    return hit;
  }
};

}  // namespace arsim::testing
