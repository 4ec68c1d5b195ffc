#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace macrorealism::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitComputation = 2,
  kExitVerification = 3,
};

/// Runs the mrwitness command line. `args` excludes the program name.
/// Results go to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace macrorealism::cli
