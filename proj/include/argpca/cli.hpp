#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace argpca {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitIo = 3 };

/// Entry point behind the `argpca` executable: subcommands simulate, argpca, angles.
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace argpca
