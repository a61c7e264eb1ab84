#include <cmath>
#include <map>

#include "common.hpp"
#include "rsqs/dense_reference.hpp"
#include "rsqs/parallel.hpp"
#include "rsqs/propagate.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

namespace {

// Step counts that keep each order inside its asymptotic regime and above
// rounding noise on the default n = 16 cosine instance.
std::vector<std::int64_t> default_steps(int k) {
  switch (k) {
    case 1:
      return {64, 128, 256, 512};
    case 2:
      return {64, 128, 256, 512};
    default:
      return {128, 192, 256, 384};
  }
}

}  // namespace

CommandResult run_order_check(const Json& config, std::optional<std::uint64_t> cli_seed) {
  const Section root(config, "config");
  GridConfig grid_cfg;
  grid_cfg.n = 16;
  if (root.has("grid")) grid_cfg = parse_grid(root.object("grid"));
  const Json potential_json =
      root.has("potential") ? root.raw("potential") : Json{{"kind", "cosine"}, {"amplitude", 10.0}};
  StateConfig state;
  if (root.has("initial_state")) state = parse_state(root.object("initial_state"));
  const double T = root.number("T", 1.0);
  std::vector<std::int64_t> ks{1, 2, 3};
  if (root.has("k_values")) ks = root.integers("k_values");
  std::map<int, std::vector<std::int64_t>> steps;
  if (root.has("steps")) {
    const Section s = root.object("steps");
    for (std::int64_t k : ks) {
      const std::string key = std::to_string(k);
      if (s.has(key)) steps[static_cast<int>(k)] = s.integers(key);
    }
    s.finish();
  }
  const std::string coeff_name = root.string("coefficient", "standard");
  if (coeff_name != "standard" && coeff_name != "printed") {
    throw ConfigError("config.coefficient: expected standard or printed");
  }
  const auto coefficient = coeff_name == "printed" ? SuzukiCoefficient::kPrinted : SuzukiCoefficient::kStandard;
  const double tolerance = root.number("tolerance", 0.2);
  const bool assert_order = root.boolean("assert_order", coefficient == SuzukiCoefficient::kStandard);
  const std::uint64_t seed = resolve_seed(root, cli_seed);
  root.finish();
  for (std::int64_t k : ks) {
    if (k < 1 || k > 4) throw ConfigError("config.k_values: k must be in 1..4");
    auto& s = steps[static_cast<int>(k)];
    if (s.empty()) s = default_steps(static_cast<int>(k));
    if (s.size() < 2) throw ConfigError("config.steps: need at least two step counts per k");
    for (std::int64_t r : s) {
      if (r < 1) throw ConfigError("config.steps: step counts must be positive");
    }
  }

  const GridSpec grid = grid_cfg.make();
  if (grid.point_count() > kDenseStateCap) throw ConfigError("config.grid: point_count exceeds the dense oracle cap");
  const Potential v = parse_potential(Section(potential_json, "config.potential"), grid.dim());
  const WaveFunction psi0 = make_state(state, grid, seed);

  Stopwatch clock;
  const WaveFunction exact = dense_reference_evolve(psi0, v, T);

  struct Series {
    int k = 1;
    std::vector<double> tau;
    std::vector<double> error;
    double slope = 0.0;
  };
  std::vector<Series> series(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    Series& s = series[i];
    s.k = static_cast<int>(ks[i]);
    for (std::int64_t r : steps[s.k]) {
      EvolveOptions opt;
      opt.k = s.k;
      opt.coefficient = coefficient;
      opt.mode = StepMode::kFixed;
      opt.steps = r;
      s.tau.push_back(T / static_cast<double>(r));
      s.error.push_back(relative_l2_distance(evolve(psi0, v, T, opt).psi, exact));
    }
    s.slope = loglog_slope(s.tau, s.error);
  });

  CommandResult out;
  Csv csv({"k", "tau", "error", "fitted_slope"});
  Json fits = Json::array();
  bool ok = true;
  for (const Series& s : series) {
    for (std::size_t j = 0; j < s.tau.size(); ++j) csv.row(s.k, s.tau[j], s.error[j], s.slope);
    const double expected = 2.0 * s.k;
    const bool within = std::abs(s.slope - expected) <= tolerance;
    if (assert_order && !within) ok = false;
    fits.push_back({{"k", s.k}, {"fitted_slope", s.slope}, {"expected_slope", expected},
                    {"tolerance", tolerance}, {"within", within}});
  }
  Json summary = {{"command", "order-check"},
                  {"coefficient", coeff_name},
                  {"T", T},
                  {"n", grid.n()},
                  {"assert_order", assert_order},
                  {"order_test_passed", ok},
                  {"rng_seed", seed},
                  {"fits", fits}};
  out.artifacts.add("order.csv", csv.str());
  out.artifacts.add("summary.json", dump(summary));
  out.sidecars.add("timing.json", dump(Json{{"total_seconds", clock.seconds()}}));
  if (!ok) out.exit_code = kExitRuntime;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rsqs::cli
