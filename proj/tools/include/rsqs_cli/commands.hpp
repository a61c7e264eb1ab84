#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rsqs_cli/artifacts.hpp"
#include "rsqs_cli/config.hpp"

namespace rsqs::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitRuntime = 3,
  kExitSuccessRate = 4,
};

struct CommandResult {
  int exit_code = kExitOk;
  Artifacts artifacts;  // deterministic outputs
  Artifacts sidecars;   // wall-clock timings, kept apart so outputs stay reproducible
};

// Each driver validates the whole config before computing. ConfigError and
// rsqs::Error escape to run_command, which maps them to exit codes.
CommandResult run_simulate(const Json& config, std::optional<std::uint64_t> seed);
CommandResult run_converge(const Json& config, std::optional<std::uint64_t> seed);
CommandResult run_order_check(const Json& config, std::optional<std::uint64_t> seed);
CommandResult run_potential_bench(const Json& config, std::optional<std::uint64_t> seed,
                                  const std::filesystem::path& config_dir);
CommandResult run_plan(const Json& config, std::optional<std::uint64_t> seed);
CommandResult run_optimize(const Json& config, std::optional<std::uint64_t> seed);

bool is_command(const std::string& name);

// Parses the config file, dispatches, writes artifacts into out_dir and
// returns the process exit code. Diagnostics go to stderr.
int run_command(const std::string& name, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed);

}  // namespace rsqs::cli
