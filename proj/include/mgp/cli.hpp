#pragma once

#include <ostream>

namespace mgp {

enum ExitCode : int { kOk = 0, kUnequal = 1, kUsage = 2, kUnstable = 3 };

// Entry point of the mgpchar tool. Output goes to `out` (or --output) in one write.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mgp
