#pragma once

// The timing recurrence: per instruction, a start time bounded by the
// instruction window, data dependencies and resource availability, and an
// end time one (scaled) latency later.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/resolve.hpp"

namespace arsim {

// Bounded FIFO of in-flight end times. Once the window is full, t_min is the
// end time of its oldest entry: the next instruction needs that slot.
class InstructionWindow {
 public:
  explicit InstructionWindow(std::size_t capacity);

  void push(double t_end);
  double t_min() const noexcept { return t_min_; }
  std::size_t occupancy() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return ring_.size(); }

 private:
  std::vector<double> ring_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  double t_min_ = 0.0;
};

// Sparse per-byte (or per-key) availability times; absent entries read 0.
class ShadowMemory {
 public:
  double get(std::uint64_t key) const;
  void max_merge(std::uint64_t key, double t);

 private:
  static constexpr std::uint64_t kPageBits = 12;
  using Page = std::array<double, std::size_t{1} << kPageBits>;

  Page* page(std::uint64_t key);
  const Page* find_page(std::uint64_t key) const;

  std::unordered_map<std::uint64_t, std::unique_ptr<Page>> pages_;
  mutable std::uint64_t cached_index_ = ~0ull;
  mutable Page* cached_ = nullptr;
};

class ShadowRegisters {
 public:
  double get(RegisterId reg) const;
  void set(RegisterId reg, double t);

 private:
  static constexpr RegisterId kDense = 4096;
  std::vector<double> dense_;
  std::unordered_map<RegisterId, double> sparse_;
};

struct ResourceUsage {
  std::string name;
  double gap = 0.0;
  std::uint64_t uses = 0;

  double busy() const { return static_cast<double>(uses) * gap; }
};

struct CacheLevelReport {
  std::string name;
  std::string parameter;  // bandwidth parameter name, empty for L1
  double gap = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t transfers = 0;
};

struct InstructionStats {
  std::uint64_t pc = 0;
  std::string label;
  double latency = 0.0;                       // scaled, from the first occurrence
  std::vector<ResourceId> resources;          // explicit uses of the first occurrence
  std::uint64_t count = 0;
  std::vector<std::uint64_t> resource_uses;   // indexed by ResourceId
  std::vector<std::uint64_t> cache_transfers; // indexed by hierarchy level
};

struct BranchCounters {
  std::uint64_t predicted = 0;
  std::uint64_t mispredicted = 0;
};

struct SimResult {
  double total_cycles = 0.0;
  std::uint64_t instruction_count = 0;
  std::vector<ResourceUsage> resources;
  std::optional<ResourceId> frontend;
  std::vector<CacheLevelReport> caches;  // L1..Ln then memory; empty without a hierarchy
  std::map<std::uint64_t, InstructionStats> instructions;
  BranchCounters branch;
  bool branch_enabled = false;
  std::size_t window_capacity = 0;
  double latency_scale = 1.0;
  std::vector<double> t_start;  // filled when SimOptions::record_timeline
  std::vector<double> t_end;

  double ipc() const { return total_cycles > 0.0 ? static_cast<double>(instruction_count) / total_cycles : 0.0; }
};

struct SimOptions {
  bool record_timeline = false;
};

SimResult simulate(std::span<const ResolvedEvent> events, const MachineConfig& config, const SimOptions& options = {});

// Fraction of the run each resource was busy, indexed by ResourceId.
std::vector<double> occupancy_report(const SimResult& result);

}  // namespace arsim
