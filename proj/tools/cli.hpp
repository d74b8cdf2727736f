#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padic::cli {

enum ExitCode : int {
  kAllHold = 0,
  kSomeFail = 1,
  kUsage = 2,
  kMismatch = 3,
};

/// Runs one command; `args` excludes the program name. Reports and CSV go to
/// `out` unless redirected with --out/--csv, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padic::cli
