#pragma once

#include <iosfwd>

namespace arsim {

// Entry point of the `arsim` tool. Returns 0 on success, 1 on bad input or
// usage, 2 when an internal invariant broke.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arsim
