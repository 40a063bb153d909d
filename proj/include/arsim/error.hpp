#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arsim {

// Anything wrong with user-supplied traces, configs or arguments.
// The command line tool maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TraceError : public InputError {
 public:
  enum class Kind { MalformedRecord, NegativeLatency, OverflowingAccess };

  TraceError(Kind kind, std::size_t line, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class ResolveError : public InputError {
 public:
  enum class Kind { UnknownKind, UnknownResource };

  ResolveError(Kind kind, std::string name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Kind kind_;
  std::string name_;
};

class ZeroTimeTrace : public InputError {
 public:
  ZeroTimeTrace() : InputError("trace has zero simulated time") {}
};

// A model invariant did not hold. Exit code 2 in the command line tool.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace arsim

#define ARSIM_CHECK(cond, msg)                                          \
  do {                                                                  \
    if (!(cond)) {                                                      \
      throw ::arsim::InvariantViolation(std::string(__FILE__) + ":" +   \
                                        std::to_string(__LINE__) + ": " + \
                                        (msg));                         \
    }                                                                   \
  } while (0)
