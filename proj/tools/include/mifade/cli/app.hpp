#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mifade::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitValidation = 4,
};

/// Runs one `mifade` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mifade::cli
