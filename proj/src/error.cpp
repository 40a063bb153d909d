#include "arsim/error.hpp"

namespace arsim {
namespace {

const char* trace_kind_name(TraceError::Kind kind) {
  switch (kind) {
    case TraceError::Kind::MalformedRecord:
      return "malformed record";
    case TraceError::Kind::NegativeLatency:
      return "negative latency";
    case TraceError::Kind::OverflowingAccess:
      return "overflowing memory access";
  }
  return "trace error";
}

std::string resolve_message(ResolveError::Kind kind, const std::string& name) {
  if (kind == ResolveError::Kind::UnknownKind) return "unknown instruction kind '" + name + "'";
  return "unknown resource '" + name + "'";
}

}  // namespace

TraceError::TraceError(Kind kind, std::size_t line, const std::string& detail)
    : InputError("line " + std::to_string(line) + ": " + trace_kind_name(kind) +
                 (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      line_(line) {}

ResolveError::ResolveError(Kind kind, std::string name)
    : InputError(resolve_message(kind, name)), kind_(kind), name_(std::move(name)) {}

}  // namespace arsim
