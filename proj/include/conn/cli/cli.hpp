#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conn::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage, config or schema error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output root. Without it, outputs go
/// under ./runs/<subcommand>.
inline constexpr const char* kOutputRootEnv = "CONN_OUTPUT_ROOT";

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace conn::cli
