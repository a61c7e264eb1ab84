#include <iostream>

#include "common.hpp"
#include "rsqs/error.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

bool is_command(const std::string& name) {
  return name == "simulate" || name == "converge" || name == "order-check" || name == "potential-bench" ||
         name == "plan" || name == "optimize";
}

int run_command(const std::string& name, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed) {
  CommandResult result;
  try {
    const Json config = parse_config_file(config_path.string());
    if (name == "simulate") {
      result = run_simulate(config, seed);
    } else if (name == "converge") {
      result = run_converge(config, seed);
    } else if (name == "order-check") {
      result = run_order_check(config, seed);
    } else if (name == "potential-bench") {
      result = run_potential_bench(config, seed, config_path.parent_path());
    } else if (name == "plan") {
      result = run_plan(config, seed);
    } else if (name == "optimize") {
      result = run_optimize(config, seed);
    } else {
      throw ConfigError("unknown command '" + name + "'");
    }
  } catch (const ConfigError& e) {
    std::cerr << "rsqs " << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Json::exception& e) {
    std::cerr << "rsqs " << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    // Argument-level failures detected by the library are config problems.
    const bool config_like = e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kOddTruncation ||
                             e.code() == ErrorCode::kTruncationTooSmall || e.code() == ErrorCode::kInvalidTolerance ||
                             e.code() == ErrorCode::kNonPositiveArg || e.code() == ErrorCode::kDimensionNot3;
    std::cerr << "rsqs " << name << ": " << e.what() << "\n";
    return config_like ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "rsqs " << name << ": runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  try {
    result.artifacts.commit(out_dir);
    result.sidecars.commit(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "rsqs " << name << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  return result.exit_code;
}

}  // namespace rsqs::cli
