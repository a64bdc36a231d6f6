#pragma once
// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 undefined result.

#include <iosfwd>

namespace kerrmzi::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, input_error = 2, undefined_result = 3 };

/// Parses argv and runs the selected subcommand (report, sweep, threshold, verify, chi3).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kerrmzi::cli
