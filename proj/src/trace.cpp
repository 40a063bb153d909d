#include "arsim/trace.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "arsim/error.hpp"
#include "json.hpp"

namespace arsim {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line, const std::string& detail) {
  throw TraceError(TraceError::Kind::MalformedRecord, line, detail);
}

std::uint64_t get_u64(const json& value, const char* field, std::size_t line) {
  if (!value.is_number_integer()) malformed(line, std::string("'") + field + "' must be an integer");
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  auto signed_value = value.get<std::int64_t>();
  if (signed_value < 0) malformed(line, std::string("'") + field + "' must be non-negative");
  return static_cast<std::uint64_t>(signed_value);
}

std::vector<RegisterId> get_registers(const json& value, const char* field, std::size_t line) {
  if (!value.is_array()) malformed(line, std::string("'") + field + "' must be an array");
  std::vector<RegisterId> regs;
  regs.reserve(value.size());
  for (const auto& item : value) {
    auto id = get_u64(item, field, line);
    if (id > std::numeric_limits<RegisterId>::max()) malformed(line, "register id out of range");
    regs.push_back(static_cast<RegisterId>(id));
  }
  return regs;
}

std::vector<MemAccess> get_accesses(const json& value, const char* field, std::size_t line) {
  if (!value.is_array()) malformed(line, std::string("'") + field + "' must be an array");
  std::vector<MemAccess> accesses;
  accesses.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_object()) malformed(line, std::string("'") + field + "' entries must be objects");
    MemAccess access;
    bool have_addr = false;
    bool have_size = false;
    for (const auto& [key, v] : item.items()) {
      if (key == "addr") {
        access.addr = get_u64(v, "addr", line);
        have_addr = true;
      } else if (key == "size") {
        access.size = get_u64(v, "size", line);
        have_size = true;
      } else {
        malformed(line, "unknown memory access field '" + key + "'");
      }
    }
    if (!have_addr || !have_size) malformed(line, "memory access needs 'addr' and 'size'");
    accesses.push_back(access);
  }
  return accesses;
}

BranchInfo get_branch(const json& value, std::size_t line) {
  if (!value.is_object()) malformed(line, "'branch' must be an object");
  BranchInfo info;
  for (const auto& [key, v] : value.items()) {
    if (key == "kind") {
      if (!v.is_string()) malformed(line, "branch kind must be a string");
      auto kind = parse_branch_kind(v.get<std::string>());
      if (!kind) malformed(line, "unknown branch kind '" + v.get<std::string>() + "'");
      info.kind = *kind;
    } else if (key == "taken") {
      if (!v.is_boolean()) malformed(line, "branch taken must be a boolean");
      info.taken = v.get<bool>();
    } else if (key == "target") {
      info.target = get_u64(v, "target", line);
    } else {
      malformed(line, "unknown branch field '" + key + "'");
    }
  }
  return info;
}

ordered_json accesses_to_json(const std::vector<MemAccess>& accesses) {
  auto out = ordered_json::array();
  for (const auto& a : accesses) out.push_back(ordered_json{{"addr", a.addr}, {"size", a.size}});
  return out;
}

}  // namespace

std::string_view to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::none:
      return "none";
    case BranchKind::conditional:
      return "conditional";
    case BranchKind::direct:
      return "direct";
    case BranchKind::indirect:
      return "indirect";
  }
  return "none";
}

std::optional<BranchKind> parse_branch_kind(std::string_view text) {
  if (text == "none") return BranchKind::none;
  if (text == "conditional") return BranchKind::conditional;
  if (text == "direct") return BranchKind::direct;
  if (text == "indirect") return BranchKind::indirect;
  return std::nullopt;
}

void validate_event(const InstructionEvent& event, std::size_t line) {
  if (event.latency && !(*event.latency >= 0.0)) {
    throw TraceError(TraceError::Kind::NegativeLatency, line, "latency must be >= 0");
  }
  bool inline_semantics = event.resources.has_value() && event.latency.has_value();
  if (!inline_semantics && !event.kind) {
    malformed(line, "record needs 'kind' or both 'resources' and 'latency'");
  }
  for (const auto* list : {&event.mem_reads, &event.mem_writes}) {
    for (const auto& access : *list) {
      if (access.size == 0) malformed(line, "memory access size must be >= 1");
      if (access.addr > std::numeric_limits<std::uint64_t>::max() - access.size) {
        throw TraceError(TraceError::Kind::OverflowingAccess, line,
                         "addr " + std::to_string(access.addr) + " + size " + std::to_string(access.size));
      }
    }
  }
  const auto& br = event.branch;
  if (br.kind == BranchKind::none && (br.taken || br.target != 0)) {
    malformed(line, "branch of kind none cannot be taken or have a target");
  }
  if (br.kind == BranchKind::direct && !br.taken) malformed(line, "direct branches are always taken");
}

InstructionEvent parse_record(std::string_view text, std::size_t line, std::uint64_t default_seq) {
  json record;
  try {
    record = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(line, e.what());
  }
  if (!record.is_object()) malformed(line, "record must be an object");

  InstructionEvent event;
  event.seq = default_seq;
  bool have_pc = false;
  for (const auto& [key, value] : record.items()) {
    if (key == "pc") {
      event.pc = get_u64(value, "pc", line);
      have_pc = true;
    } else if (key == "seq") {
      event.seq = get_u64(value, "seq", line);
    } else if (key == "kind") {
      if (!value.is_string()) malformed(line, "'kind' must be a string");
      event.kind = value.get<std::string>();
    } else if (key == "resources") {
      if (!value.is_array()) malformed(line, "'resources' must be an array");
      std::vector<std::string> names;
      for (const auto& item : value) {
        if (!item.is_string()) malformed(line, "resource names must be strings");
        names.push_back(item.get<std::string>());
      }
      event.resources = std::move(names);
    } else if (key == "latency") {
      if (!value.is_number()) malformed(line, "'latency' must be a number");
      event.latency = value.get<double>();
    } else if (key == "reg_reads") {
      event.reg_reads = get_registers(value, "reg_reads", line);
    } else if (key == "reg_writes") {
      event.reg_writes = get_registers(value, "reg_writes", line);
    } else if (key == "mem_reads") {
      event.mem_reads = get_accesses(value, "mem_reads", line);
    } else if (key == "mem_writes") {
      event.mem_writes = get_accesses(value, "mem_writes", line);
    } else if (key == "branch") {
      event.branch = get_branch(value, line);
    } else {
      malformed(line, "unknown field '" + key + "'");
    }
  }
  if (!have_pc) malformed(line, "missing 'pc'");
  validate_event(event, line);
  return event;
}

std::optional<InstructionEvent> TraceReader::next() {
  std::string text;
  while (std::getline(*in_, text)) {
    ++line_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto event = parse_record(text, line_, index_);
    if (last_seq_ && event.seq <= *last_seq_) malformed(line_, "seq must strictly increase");
    last_seq_ = event.seq;
    ++index_;
    return event;
  }
  return std::nullopt;
}

std::vector<InstructionEvent> parse_trace(std::istream& in) {
  TraceReader reader(in);
  std::vector<InstructionEvent> events;
  while (auto event = reader.next()) events.push_back(std::move(*event));
  return events;
}

std::vector<InstructionEvent> parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

std::vector<InstructionEvent> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

std::string write_record(const InstructionEvent& event, bool with_seq) {
  ordered_json record;
  record["pc"] = event.pc;
  if (with_seq) record["seq"] = event.seq;
  if (event.kind) record["kind"] = *event.kind;
  if (event.resources) record["resources"] = *event.resources;
  if (event.latency) record["latency"] = *event.latency;
  if (!event.reg_reads.empty()) record["reg_reads"] = event.reg_reads;
  if (!event.reg_writes.empty()) record["reg_writes"] = event.reg_writes;
  if (!event.mem_reads.empty()) record["mem_reads"] = accesses_to_json(event.mem_reads);
  if (!event.mem_writes.empty()) record["mem_writes"] = accesses_to_json(event.mem_writes);
  if (event.branch.kind != BranchKind::none) {
    record["branch"] = ordered_json{{"kind", std::string(to_string(event.branch.kind))},
                                    {"taken", event.branch.taken},
                                    {"target", event.branch.target}};
  }
  return record.dump();
}

void write_trace(std::ostream& out, std::span<const InstructionEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    // seq is implicit when it equals the record index
    out << write_record(events[i], events[i].seq != i) << '\n';
  }
}

std::string write_trace(std::span<const InstructionEvent> events) {
  std::ostringstream out;
  write_trace(out, events);
  return out.str();
}

}  // namespace arsim
