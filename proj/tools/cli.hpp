#pragma once

namespace uqbench::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 invalid arguments, 3 I/O error.
enum ExitCode : int { kOk = 0, kNumerical = 1, kInvalid = 2, kIo = 3 };

/// Runs one command line (argv[0] is the program name). Artifacts go to
/// --out (stdout by default); diagnostics go to stderr.
int run(int argc, const char* const* argv);

} // namespace uqbench::cli
