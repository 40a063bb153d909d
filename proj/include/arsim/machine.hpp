#pragma once

// The modeled machine: throughput-limited resources, instruction kinds,
// instruction window, cache hierarchy and branch predictor parameters.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arsim {

using ResourceId = std::uint32_t;

// Reserved names of the non-resource parameters that sensitivity analysis
// can accelerate.
inline constexpr std::string_view kInstLat = "INST_LAT";
inline constexpr std::string_view kInstWindow = "INST_WINDOW";
// Cache bandwidth parameters are named "<level>_THR", e.g. L2_THR, MEM_THR.
inline constexpr std::string_view kBandwidthSuffix = "_THR";

struct Resource {
  ResourceId id = 0;
  std::string name;
  double gap = 1.0;  // cycles between two consecutive uses

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct InstructionKind {
  std::string name;
  std::vector<ResourceId> resources;  // multiset, repeats allowed
  double latency = 0.0;

  friend bool operator==(const InstructionKind&, const InstructionKind&) = default;
};

struct CacheLevelConfig {
  std::string name;
  std::uint64_t total_size = 0;
  std::uint64_t associativity = 1;
  std::uint64_t line_size = 64;
  double gap = 1.0;  // cycles per line transfer through this level

  std::uint64_t num_sets() const { return total_size / (associativity * line_size); }

  friend bool operator==(const CacheLevelConfig&, const CacheLevelConfig&) = default;
};

// Backstop below the last cache level; always hits.
struct MemoryConfig {
  std::string name = "MEM";
  double gap = 1.0;

  friend bool operator==(const MemoryConfig&, const MemoryConfig&) = default;
};

struct BranchConfig {
  bool enabled = false;
  std::uint32_t btb_sets = 64;
  std::uint32_t btb_ways = 4;
  std::uint32_t base_entries_log2 = 12;
  std::vector<std::uint32_t> tage_entries_log2{10, 10, 10, 10};
  std::vector<std::uint32_t> history_lengths{4, 8, 16, 32};
  std::uint32_t tag_bits = 9;
  double misprediction_penalty = 15.0;

  std::size_t tage_tables() const { return history_lengths.size(); }

  friend bool operator==(const BranchConfig&, const BranchConfig&) = default;
};

enum class ShadowGranularity : std::uint8_t { byte, line };

struct MachineConfig {
  std::vector<Resource> resources;  // resources[i].id == i
  std::map<std::string, InstructionKind, std::less<>> kinds;
  std::size_t window_capacity = 1;
  std::optional<ResourceId> frontend;
  double latency_scale = 1.0;
  std::vector<CacheLevelConfig> cache_levels;  // L1 first
  std::optional<MemoryConfig> memory;          // present iff cache_levels is not empty
  ShadowGranularity shadow = ShadowGranularity::byte;
  BranchConfig branch;

  std::optional<ResourceId> find_resource(std::string_view name) const;

  // Name of the bandwidth parameter for hierarchy level `level` (1 = second
  // cache level, cache_levels.size() = memory). L1 has none.
  std::string bandwidth_parameter(std::size_t level) const;

  // Resources (config order) followed by cache bandwidth parameters.
  std::vector<std::string> throughput_parameters() const;
  // throughput_parameters() plus INST_LAT and INST_WINDOW.
  std::vector<std::string> accelerable_parameters() const;

  friend bool operator==(const MachineConfig&, const MachineConfig&) = default;
};

// Throws ConfigError on any violated invariant.
void validate_config(const MachineConfig& config);

MachineConfig load_config(std::string_view text);
MachineConfig load_config_file(const std::filesystem::path& path);
std::string dump_config(const MachineConfig& config);

// Accelerable parameter name -> weight (>= 1).
using WeightVector = std::map<std::string, double, std::less<>>;

MachineConfig apply_weights(const MachineConfig& config, const WeightVector& weights);

}  // namespace arsim
