#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tol {

/// Process exit codes of `tolcheck`.
enum ExitStatus : int {
  kSat = 0,
  kUnsat = 1,
  kUsage = 2,
  kOracleScale = 3,
};

/// Runs `tolcheck` with `args` (without the program name). Results go to
/// `out`, diagnostics and usage text to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tol
