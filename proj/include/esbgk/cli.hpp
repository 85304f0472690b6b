#pragma once

namespace esbgk {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
/// 3 runtime failure.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfig = 2, kExitRuntime = 3 };

/// Entry point for the `esbgk` executable. `envp` supplies ESBGK_* overrides;
/// null means the process environment.
int run_cli(int argc, char** argv, const char* const* envp = nullptr);

}  // namespace esbgk
