#pragma once

#include <iosfwd>

namespace polykin {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitIo = 3, kExitNumerical = 4 };

/// Entry point of the polykin command line; writes results to out and
/// diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polykin
