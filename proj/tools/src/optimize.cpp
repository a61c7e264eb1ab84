#include <cmath>

#include "common.hpp"
#include "rsqs/optimizer.hpp"
#include "rsqs/parallel.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

namespace {

constexpr double kRequiredSuccessRate = 2.0 / 3.0;

ObjectiveSpec parse_objective(const Section& s) {
  ObjectiveSpec o = objective_by_name(s.string("name"), static_cast<int>(s.integer("dim", 0)));
  o.ell = s.number("ell", o.ell);
  o.rho = s.number("rho", o.rho);
  o.gap = s.number("gap", o.gap);
  o.domain_radius = s.number("domain_radius", o.domain_radius);
  if (s.has("x0")) o.x0 = s.numbers("x0");
  s.finish();
  o.validate();
  return o;
}

}  // namespace

CommandResult run_optimize(const Json& config, std::optional<std::uint64_t> cli_seed) {
  const Section root(config, "config");
  const ObjectiveSpec obj = parse_objective(root.object("objective"));
  EscapeConfig base;
  base.eps = root.number("eps", base.eps);
  base.c_r = root.number("c_r", base.c_r);
  base.r0 = root.optional_number("r0");
  base.t_prime = root.optional_number("t_prime");
  base.eta_step = root.optional_number("eta_step");
  base.max_iters = root.integer("max_iters", base.max_iters);
  const std::string scale = root.string("perturbation", "dimensional");
  if (scale == "dimensional") {
    base.perturbation = PerturbationScale::kDimensional;
  } else if (scale == "printed") {
    base.perturbation = PerturbationScale::kPrinted;
  } else {
    throw ConfigError("config.perturbation: expected dimensional or printed");
  }
  if (root.has("simulation")) {
    const Section s = root.object("simulation");
    base.simulation.n = static_cast<int>(s.integer("n", base.simulation.n));
    base.simulation.dt = s.number("dt", base.simulation.dt);
    base.simulation.k = static_cast<int>(s.integer("k", base.simulation.k));
    base.simulation.mollifier_fraction = s.number("mollifier_fraction", base.simulation.mollifier_fraction);
    s.finish();
  }
  base.record_trace = root.boolean("record_trace", true);
  const std::int64_t seeds = root.integer("seeds", 30);
  const std::uint64_t seed = resolve_seed(root, cli_seed);
  root.finish();
  if (seeds < 1) throw ConfigError("config.seeds: must be >= 1");
  if (base.max_iters < 1) throw ConfigError("config.max_iters: must be >= 1");

  Stopwatch clock;
  std::vector<PgdResult> results(static_cast<std::size_t>(seeds));
  parallel_for(results.size(), [&](std::size_t i) {
    EscapeConfig cfg = base;
    cfg.seed = seed + i;
    results[i] = pgd_qs(obj, cfg);
  });

  std::vector<std::string> header{"seed", "certified", "max_iters_exceeded", "iterations", "sim_calls",
                                  "grad_norm", "lambda_min", "f"};
  for (int a = 0; a < obj.dim; ++a) header.push_back("x" + std::to_string(a + 1));
  Csv outcomes(header);
  Csv trace({"seed", "iter", "grad_norm", "f", "sim_calls", "t_prime"});
  Csv calls({"seed", "iter", "t_prime", "sign", "f_plus", "f_minus", "xi_norm"});
  int successes = 0;
  std::int64_t total_calls = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PgdResult& r = results[i];
    const unsigned long long s = seed + i;
    std::vector<std::string> cells{std::to_string(s), r.certified ? "1" : "0", r.max_iters_exceeded ? "1" : "0",
                                   std::to_string(r.iterations), std::to_string(r.calls.size()),
                                   fmt(r.grad_norm), fmt(r.lambda_min), fmt(r.f)};
    for (double v : r.x) cells.push_back(fmt(v));
    outcomes.row_cells(cells);
    for (const PgdTraceRow& t : r.trace) trace.row(s, t.iter, t.grad_norm, t.f, t.sim_calls, t.t_prime);
    for (const SimulationCall& c : r.calls) {
      double xi2 = 0.0;
      for (double v : c.xi) xi2 += v * v;
      calls.row(s, c.iter, c.t_prime, c.sign, c.f_plus, c.f_minus, std::sqrt(xi2));
    }
    if (r.certified) ++successes;
    total_calls += static_cast<std::int64_t>(r.calls.size());
  }
  const double rate = static_cast<double>(successes) / static_cast<double>(seeds);
  const bool passed = rate >= kRequiredSuccessRate;
  Json summary = {{"command", "optimize"},
                  {"objective", obj.name},
                  {"dim", obj.dim},
                  {"eps", base.eps},
                  {"perturbation", scale},
                  {"seeds", seeds},
                  {"rng_seed", seed},
                  {"successes", successes},
                  {"success_rate", rate},
                  {"required_success_rate", kRequiredSuccessRate},
                  {"passed", passed},
                  {"simulation_calls", total_calls},
                  {"t_prime", results.front().t_prime},
                  {"r0", results.front().r0}};
  CommandResult out;
  out.artifacts.add("outcomes.csv", outcomes.str());
  if (base.record_trace) out.artifacts.add("trace.csv", trace.str());
  out.artifacts.add("calls.csv", calls.str());
  out.artifacts.add("summary.json", dump(summary));
  out.sidecars.add("timing.json", dump(Json{{"total_seconds", clock.seconds()}}));
  if (!passed) out.exit_code = kExitSuccessRate;
  return out;
}

}  // namespace rsqs::cli
