#include <CLI11.hpp>

#include <optional>
#include <string>

#include "rsqs_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Real-space Schrodinger simulation experiments"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"simulate", "converge", "order-check", "potential-bench", "plan", "optimize"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--seed", seed, "override rng_seed from the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rsqs::cli::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return rsqs::cli::run_command(command, config, out, seed);
}
