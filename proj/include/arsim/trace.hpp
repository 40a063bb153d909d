#pragma once

// Instruction-event stream that drives the simulator, and its line-oriented
// JSON file format (one record per line).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arsim {

using RegisterId = std::uint32_t;

struct MemAccess {
  std::uint64_t addr = 0;
  std::uint64_t size = 1;

  friend bool operator==(const MemAccess&, const MemAccess&) = default;
};

enum class BranchKind : std::uint8_t { none, conditional, direct, indirect };

std::string_view to_string(BranchKind kind);
std::optional<BranchKind> parse_branch_kind(std::string_view text);

struct BranchInfo {
  BranchKind kind = BranchKind::none;
  bool taken = false;
  std::uint64_t target = 0;

  friend bool operator==(const BranchInfo&, const BranchInfo&) = default;
};

// One dynamic instruction. Execution semantics come either from `kind`
// (looked up in the machine's kind table) or from inline `resources` plus
// `latency`; inline values win when both are present.
struct InstructionEvent {
  std::uint64_t seq = 0;
  std::uint64_t pc = 0;
  std::optional<std::string> kind;
  std::optional<std::vector<std::string>> resources;
  std::optional<double> latency;
  std::vector<RegisterId> reg_reads;
  std::vector<RegisterId> reg_writes;
  std::vector<MemAccess> mem_reads;
  std::vector<MemAccess> mem_writes;
  BranchInfo branch;

  friend bool operator==(const InstructionEvent&, const InstructionEvent&) = default;
};

// Checks the per-record invariants. Throws TraceError tagged with `line`.
void validate_event(const InstructionEvent& event, std::size_t line);

// Parses one record. `default_seq` is used when the record carries no seq.
InstructionEvent parse_record(std::string_view text, std::size_t line, std::uint64_t default_seq);

// Pulls events one at a time from a stream. Blank lines are skipped; seq
// defaults to the record index and must strictly increase.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in) : in_(&in) {}

  std::optional<InstructionEvent> next();
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream* in_;
  std::size_t line_ = 0;
  std::uint64_t index_ = 0;
  std::optional<std::uint64_t> last_seq_;
};

std::vector<InstructionEvent> parse_trace(std::istream& in);
std::vector<InstructionEvent> parse_trace(std::string_view text);
std::vector<InstructionEvent> read_trace_file(const std::string& path);

std::string write_record(const InstructionEvent& event, bool with_seq);
std::string write_trace(std::span<const InstructionEvent> events);
void write_trace(std::ostream& out, std::span<const InstructionEvent> events);

}  // namespace arsim
