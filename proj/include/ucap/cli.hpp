#pragma once

#include <iosfwd>

namespace ucap {

// Entry point shared by the `ucap` binary and the CLI tests. Returns 0 on
// success, 1 on usage or validation errors, 2 on runtime errors.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucap
