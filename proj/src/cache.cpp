#include "arsim/cache.hpp"

#include <algorithm>
#include <bit>

#include "arsim/error.hpp"

namespace arsim {

std::vector<std::uint64_t> line_accesses(const MemAccess& access, std::uint64_t line_size) {
  std::vector<std::uint64_t> lines;
  if (access.size == 0) return lines;
  const std::uint64_t first = access.addr / line_size * line_size;
  const std::uint64_t last = (access.addr + access.size - 1) / line_size * line_size;
  for (std::uint64_t line = first;; line += line_size) {
    lines.push_back(line);
    if (line == last) break;
  }
  return lines;
}

PlruSet::PlruSet(std::uint32_t ways) : tags_(ways), bits_(ways > 0 ? ways - 1 : 0, 0) {
  ARSIM_CHECK(ways > 0 && std::has_single_bit(ways), "PLRU associativity must be a power of two");
}

std::optional<std::uint32_t> PlruSet::find(std::uint64_t tag) const {
  for (std::uint32_t w = 0; w < tags_.size(); ++w) {
    if (tags_[w] == tag) return w;
  }
  return std::nullopt;
}

std::uint32_t PlruSet::victim() const {
  std::size_t node = 0;
  while (node < bits_.size()) node = 2 * node + 1 + bits_[node];
  return static_cast<std::uint32_t>(node - bits_.size());
}

void PlruSet::touch(std::uint32_t way) {
  // Walk leaf to root, pointing every node at the sibling subtree.
  std::size_t node = way + bits_.size();
  while (node > 0) {
    std::size_t parent = (node - 1) / 2;
    bool came_from_left = node == 2 * parent + 1;
    bits_[parent] = came_from_left ? 1 : 0;
    node = parent;
  }
}

std::uint32_t PlruSet::insert(std::uint64_t tag) {
  auto empty = std::find(tags_.begin(), tags_.end(), std::nullopt);
  std::uint32_t way = empty != tags_.end() ? static_cast<std::uint32_t>(empty - tags_.begin()) : victim();
  tags_[way] = tag;
  touch(way);
  return way;
}

CacheHierarchy::CacheHierarchy(std::span<const CacheLevelConfig> levels, const MemoryConfig& memory) {
  if (!levels.empty()) line_size_ = levels.front().line_size;
  for (const auto& cfg : levels) {
    Level level;
    level.num_sets = cfg.num_sets();
    level.sets.assign(level.num_sets, PlruSet(static_cast<std::uint32_t>(cfg.associativity)));
    caches_.push_back(std::move(level));
    gaps_.push_back(cfg.gap);
    names_.push_back(cfg.name);
  }
  gaps_.push_back(memory.gap);
  names_.push_back(memory.name);
  t_avail_.assign(level_count(), 0.0);
  stats_.assign(level_count(), {});
}

bool CacheHierarchy::contains(std::size_t level, std::uint64_t line) const {
  if (level >= caches_.size()) return true;
  const auto& c = caches_[level];
  const std::uint64_t block = line / line_size_;
  return c.sets[block % c.num_sets].find(block / c.num_sets).has_value();
}

std::size_t CacheHierarchy::lookup_and_fill(std::uint64_t line) {
  const std::uint64_t block = line / line_size_;
  std::size_t hit = caches_.size();
  for (std::size_t l = 0; l < caches_.size(); ++l) {
    auto& c = caches_[l];
    auto& set = c.sets[block % c.num_sets];
    if (auto way = set.find(block / c.num_sets)) {
      set.touch(*way);
      ++stats_[l].hits;
      hit = l;
      break;
    }
    ++stats_[l].misses;
  }
  if (hit == caches_.size()) ++stats_[hit].hits;
  for (std::size_t l = 0; l < hit; ++l) {
    auto& c = caches_[l];
    c.sets[block % c.num_sets].insert(block / c.num_sets);
  }
  return hit;
}

double CacheHierarchy::consume_bandwidth(std::size_t hit_level, AccessType /*type*/) {
  ARSIM_CHECK(hit_level < level_count(), "hit level out of range");
  double avail = 0.0;
  for (std::size_t l = 1; l <= hit_level; ++l) avail = std::max(avail, t_avail_[l]);
  for (std::size_t l = 1; l <= hit_level; ++l) {
    t_avail_[l] += gaps_[l];
    ++stats_[l].transfers;
  }
  return avail;
}

}  // namespace arsim
