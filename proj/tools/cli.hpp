#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lone::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kCheckFailed = 3 };

/// Runs one `lone` invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lone::cli
