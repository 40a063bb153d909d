#pragma once

// Multi-level set-associative cache hierarchy with tree-PLRU replacement.
// Tracks hit levels and the bandwidth timestamps of every level below L1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/trace.hpp"

namespace arsim {

// Line-aligned addresses of every line touched by [addr, addr + size), ascending.
std::vector<std::uint64_t> line_accesses(const MemAccess& access, std::uint64_t line_size);

// One set. Tree bits are heap-ordered (node i has children 2i+1, 2i+2);
// a bit of 0 sends the victim search left, 1 sends it right.
class PlruSet {
 public:
  explicit PlruSet(std::uint32_t ways);

  std::uint32_t ways() const noexcept { return static_cast<std::uint32_t>(tags_.size()); }
  std::optional<std::uint32_t> find(std::uint64_t tag) const;
  std::optional<std::uint64_t> tag_at(std::uint32_t way) const { return tags_[way]; }

  std::uint32_t victim() const;
  void touch(std::uint32_t way);
  // Installs into the lowest invalid way, else the PLRU victim. Returns the way.
  std::uint32_t insert(std::uint64_t tag);

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

 private:
  std::vector<std::optional<std::uint64_t>> tags_;
  std::vector<std::uint8_t> bits_;
};

enum class AccessType : std::uint8_t { load, store };

struct CacheLevelStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t transfers = 0;  // bandwidth uses charged to this level
};

class CacheHierarchy {
 public:
  CacheHierarchy(std::span<const CacheLevelConfig> levels, const MemoryConfig& memory);

  // Cache levels plus the memory backstop.
  std::size_t level_count() const noexcept { return caches_.size() + 1; }
  std::size_t memory_level() const noexcept { return caches_.size(); }
  std::uint64_t line_size() const noexcept { return line_size_; }

  // Index of the nearest level holding `line` (memory_level() if none); the
  // line is then installed in every level above it.
  std::size_t lookup_and_fill(std::uint64_t line);

  // Charges one line transfer to every level from L2 down to `hit_level` and
  // returns the latest availability among them before the charge. L1 hits are free.
  double consume_bandwidth(std::size_t hit_level, AccessType type);

  bool contains(std::size_t level, std::uint64_t line) const;
  double t_avail(std::size_t level) const { return t_avail_[level]; }
  double gap(std::size_t level) const { return gaps_[level]; }
  const std::string& name(std::size_t level) const { return names_[level]; }
  const CacheLevelStats& stats(std::size_t level) const { return stats_[level]; }

 private:
  struct Level {
    std::uint64_t num_sets;
    std::vector<PlruSet> sets;
  };

  std::vector<Level> caches_;
  std::uint64_t line_size_ = 64;
  std::vector<double> t_avail_;
  std::vector<double> gaps_;
  std::vector<std::string> names_;
  std::vector<CacheLevelStats> stats_;
};

}  // namespace arsim
