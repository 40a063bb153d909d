#pragma once

#include <span>
#include <string>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/trace.hpp"

namespace arsim {

// An event bound to a concrete machine: resource names replaced by ids,
// latency fixed, frontend use appended.
struct ResolvedEvent {
  std::uint64_t seq = 0;
  std::uint64_t pc = 0;
  std::string label;
  std::vector<ResourceId> resources;
  std::size_t explicit_resources = 0;  // leading entries of `resources` not added by resolution
  double latency = 0.0;                // unscaled
  std::vector<RegisterId> reg_reads;
  std::vector<RegisterId> reg_writes;
  std::vector<MemAccess> mem_reads;
  std::vector<MemAccess> mem_writes;
  BranchInfo branch;

  friend bool operator==(const ResolvedEvent&, const ResolvedEvent&) = default;
};

ResolvedEvent resolve_event(const InstructionEvent& event, const MachineConfig& config);
std::vector<ResolvedEvent> resolve_trace(std::span<const InstructionEvent> events, const MachineConfig& config);

}  // namespace arsim
