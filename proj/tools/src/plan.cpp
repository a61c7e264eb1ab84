#include "common.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/propagate.hpp"
#include "rsqs/rescaled_clock.hpp"
#include "rsqs/spectral.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

CommandResult run_plan(const Json& config, std::optional<std::uint64_t> cli_seed) {
  const Section root(config, "config");
  const double g_prime = root.number("g_prime");
  const double eps = root.number("eps");
  const int dim = static_cast<int>(root.integer("dim", 1));
  const int k = static_cast<int>(root.integer("k", 1));
  const double T = root.number("T");
  const std::optional<double> h_norm = root.optional_number("h_norm");
  const double f_max = root.number("f_max", 0.0);
  std::optional<GridConfig> grid_cfg;
  if (root.has("grid")) grid_cfg = parse_grid(root.object("grid"));
  std::optional<Json> potential_json;
  if (root.has("potential")) potential_json = root.raw("potential");
  const int quad_points = static_cast<int>(root.integer("quad_points", 1025));
  const std::uint64_t seed = resolve_seed(root, cli_seed);
  root.finish();
  if (potential_json && !grid_cfg) throw ConfigError("config.potential: needs a grid to sample f_max1");

  const TruncationReport trunc = select_truncation(g_prime, eps, dim);
  double h = 0.0;
  std::string h_source;
  if (h_norm) {
    h = *h_norm;
    h_source = "config";
  } else if (grid_cfg) {
    h = default_h_norm(grid_cfg->make(), f_max);
    h_source = "grid";
  } else {
    h = default_h_norm(make_grid(1, dim, trunc.n_selected), f_max);
    h_source = "selected_truncation";
  }
  const StepPlan plan = plan_steps(k, h, T, eps);
  const std::int64_t per_step = potential_exponentials_per_step(k);

  Json report = {{"command", "plan"},
                 {"g_prime", g_prime},
                 {"eps", eps},
                 {"dim", dim},
                 {"n_closed_form", trunc.n_closed_form},
                 {"n_selected", trunc.n_selected},
                 {"truncation_bound_abs", trunc.bound_abs},
                 {"truncation_bound_rel", trunc.bound_rel},
                 {"k", k},
                 {"T", T},
                 {"h_norm", h},
                 {"h_norm_source", h_source},
                 {"exponential_budget", plan.budget},
                 {"steps", plan.r},
                 {"tau", plan.tau},
                 {"kicks_per_step", per_step},
                 {"total_kicks", plan.r * per_step},
                 {"rng_seed", seed}};
  if (potential_json) {
    const GridSpec g = grid_cfg->make();
    const Potential v = parse_potential(Section(*potential_json, "config.potential"), g.dim());
    report["f_max1"] = T > 0.0 ? build_rescaled_clock(v, T, g, quad_points).f_max1() : 0.0;
  }
  CommandResult out;
  out.artifacts.add("plan.json", dump(report));
  return out;
}

}  // namespace rsqs::cli
