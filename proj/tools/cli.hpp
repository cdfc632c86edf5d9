#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pgcl::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParseError = 2,
  kBadOptions = 3,
  kPrecondition = 4,
  kTop = 5,
};

/// Entry point shared by the `pgcl` binary and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgcl::cli
