#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace estimability::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 2, kNumericalFailure = 3 };

/// Runs one invocation. `args` excludes the program name. JSON reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace estimability::cli
