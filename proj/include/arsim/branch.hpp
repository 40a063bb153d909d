#pragma once

// Branch prediction unit: an LRU branch target buffer plus a TAGE-style
// direction predictor (bimodal base table and tagged geometric-history tables).

#include <cstdint>
#include <optional>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/trace.hpp"

namespace arsim {

class BranchTargetBuffer {
 public:
  BranchTargetBuffer(std::uint32_t sets, std::uint32_t ways);

  std::optional<std::uint64_t> lookup(std::uint64_t pc) const;
  // Inserts or refreshes pc -> target and makes it most recently used.
  void insert(std::uint64_t pc, std::uint64_t target);

 private:
  struct Entry {
    std::uint64_t tag;
    std::uint64_t target;
  };
  std::uint32_t sets_;
  std::uint32_t ways_;
  std::vector<std::vector<Entry>> lru_;  // per set, most recent first
};

struct BranchPrediction {
  bool taken = false;
  std::optional<std::uint64_t> target;
};

class BranchPredictor {
 public:
  explicit BranchPredictor(const BranchConfig& config);

  BranchPrediction predict(std::uint64_t pc, BranchKind kind) const;
  void update(std::uint64_t pc, const BranchInfo& actual);

  std::uint8_t base_counter(std::uint64_t pc) const;
  // Valid tagged entries across all tables.
  std::size_t allocated_entries() const;
  std::uint64_t history() const noexcept { return history_; }

 private:
  struct TaggedEntry {
    bool valid = false;
    std::uint32_t tag = 0;
    std::uint8_t counter = 4;  // 3-bit, taken when >= 4
    bool useful = false;
  };
  struct Lookup {
    std::vector<std::size_t> index;
    std::vector<std::uint32_t> tag;
    int provider = -1;
    int alternate = -1;
  };

  Lookup lookup(std::uint64_t pc) const;
  bool direction(const Lookup& l, std::uint64_t pc) const;
  std::size_t base_index(std::uint64_t pc) const;

  BranchConfig config_;
  BranchTargetBuffer btb_;
  std::vector<std::uint8_t> base_;  // 2-bit counters, taken when >= 2
  std::vector<std::vector<TaggedEntry>> tables_;
  std::uint64_t history_ = 0;
};

bool is_mispredicted(const BranchPrediction& predicted, const BranchInfo& actual);

// Frontend delay charged for this branch: the configured penalty when the
// direction or the needed target was wrong, else 0. Always 0 when disabled.
double misprediction_delay(const BranchPrediction& predicted, const BranchInfo& actual, const BranchConfig& config);

}  // namespace arsim
