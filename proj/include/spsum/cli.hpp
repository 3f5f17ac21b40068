#pragma once

#include <iosfwd>

namespace spsum::cli {

enum ExitCode : int { kOk = 0, kWarning = 1, kUsage = 2, kNumerical = 3 };

/// Parses argv and runs one subcommand. Results go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spsum::cli
