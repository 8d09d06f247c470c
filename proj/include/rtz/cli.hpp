#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtz {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Environment variable that supplies the output directory when --out is absent.
inline constexpr const char* kOutDirEnv = "RTZEROS_OUT_DIR";

/// Entry point for the `rtzeros` tool. `args` excludes the program name.
///
/// Subcommands: simulate, gauss-oracle, diagnostics, abel-check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtz
