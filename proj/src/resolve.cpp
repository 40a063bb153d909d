#include "arsim/resolve.hpp"

#include "arsim/error.hpp"

namespace arsim {

ResolvedEvent resolve_event(const InstructionEvent& event, const MachineConfig& config) {
  ResolvedEvent out;
  out.seq = event.seq;
  out.pc = event.pc;
  out.label = event.kind.value_or("");

  const InstructionKind* kind = nullptr;
  if (event.kind) {
    auto it = config.kinds.find(*event.kind);
    if (it != config.kinds.end()) {
      kind = &it->second;
    } else if (!(event.resources && event.latency)) {
      throw ResolveError(ResolveError::Kind::UnknownKind, *event.kind);
    }
  }

  if (event.resources) {
    for (const auto& name : *event.resources) {
      auto id = config.find_resource(name);
      if (!id) throw ResolveError(ResolveError::Kind::UnknownResource, name);
      out.resources.push_back(*id);
    }
  } else if (kind) {
    out.resources = kind->resources;
  }
  if (event.latency) {
    out.latency = *event.latency;
  } else if (kind) {
    out.latency = kind->latency;
  }
  if (!(event.resources || kind) || !(event.latency || kind)) {
    throw InputError("event " + std::to_string(event.seq) + " has no execution semantics");
  }

  out.explicit_resources = out.resources.size();
  if (config.frontend) out.resources.push_back(*config.frontend);

  out.reg_reads = event.reg_reads;
  out.reg_writes = event.reg_writes;
  out.mem_reads = event.mem_reads;
  out.mem_writes = event.mem_writes;
  out.branch = event.branch;
  return out;
}

std::vector<ResolvedEvent> resolve_trace(std::span<const InstructionEvent> events, const MachineConfig& config) {
  std::vector<ResolvedEvent> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(resolve_event(e, config));
  return out;
}

}  // namespace arsim
