#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlc::cli {

/// Runs one command line (args[0] is the program name). Writes a single JSON
/// document to `out`, diagnostics to `err`, and returns the process exit code:
/// 0 ok, 2 validation, 3 unreachable, 4 infeasible, 5 non-contractive, 6 I/O,
/// 7 sampling budget exhausted, 8 no convergence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rlc::cli
