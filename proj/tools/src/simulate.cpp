#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include "common.hpp"
#include "rsqs/dense_reference.hpp"
#include "rsqs/propagate.hpp"
#include "rsqs/rescaled_clock.hpp"
#include "rsqs/snapshot.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

namespace {

struct SimulateConfig {
  GridConfig grid;
  Json potential;
  StateConfig state;
  double T = 0.0;
  int k = 1;
  StepMode mode = StepMode::kBound;
  double eps = 1e-3;
  std::optional<std::int64_t> steps;
  std::optional<double> h_norm;
  SuzukiCoefficient coefficient = SuzukiCoefficient::kStandard;
  std::int64_t diagnostics_every = 1;
  bool rescaled = false;
  int quad_points = 1025;
  std::string oracle = "auto";
  std::uint64_t seed = 0;
};

StepMode parse_mode(const std::string& s) {
  if (s == "bound") return StepMode::kBound;
  if (s == "fixed") return StepMode::kFixed;
  if (s == "adaptive") return StepMode::kAdaptive;
  throw ConfigError("propagator.mode: expected bound, fixed or adaptive");
}

SuzukiCoefficient parse_coefficient(const std::string& s) {
  if (s == "standard") return SuzukiCoefficient::kStandard;
  if (s == "printed") return SuzukiCoefficient::kPrinted;
  throw ConfigError("coefficient: expected standard or printed");
}

// Constant offset when v is zero or constant, so a plane wave has a closed form.
std::optional<double> constant_offset(const Potential& v) {
  if (std::holds_alternative<ZeroPotential>(v.kind())) return 0.0;
  if (const auto* c = std::get_if<ConstantPotential>(&v.kind())) return c->value;
  return std::nullopt;
}

}  // namespace

CommandResult run_simulate(const Json& config, std::optional<std::uint64_t> cli_seed) {
  const Section root(config, "config");
  SimulateConfig c;
  c.grid = parse_grid(root.object("grid"));
  c.potential = root.raw("potential");
  c.state = parse_state(root.object("initial_state"));
  {
    const Section p = root.object("propagator");
    c.T = p.number("T");
    c.k = static_cast<int>(p.integer("k", 1));
    c.mode = parse_mode(p.string("mode", "bound"));
    c.eps = p.number("eps", 1e-3);
    if (p.has("steps")) c.steps = p.integer("steps");
    c.h_norm = p.optional_number("h_norm");
    c.coefficient = parse_coefficient(p.string("coefficient", "standard"));
    c.diagnostics_every = p.integer("diagnostics_every", 1);
    c.rescaled = p.boolean("rescaled", false);
    c.quad_points = static_cast<int>(p.integer("quad_points", 1025));
    p.finish();
  }
  c.oracle = root.string("oracle", "auto");
  if (c.oracle != "auto" && c.oracle != "on" && c.oracle != "off") {
    throw ConfigError("config.oracle: expected auto, on or off");
  }
  c.seed = resolve_seed(root, cli_seed);
  root.finish();
  if (c.mode == StepMode::kFixed && !c.steps) throw ConfigError("propagator.steps: required in fixed mode");
  if (c.diagnostics_every < 1) throw ConfigError("propagator.diagnostics_every: must be >= 1");

  const GridSpec grid = c.grid.make();
  const Potential v = parse_potential(Section(c.potential, "config.potential"), grid.dim());
  const WaveFunction psi0 = make_state(c.state, grid, c.seed);

  CommandResult out;
  Stopwatch clock;
  Csv diag({"step", "time", "norm", "energy"});
  WaveFunction psi = psi0;
  std::int64_t r = 0;
  std::uint64_t kicks = 0;
  std::optional<double> estimate;
  Json extra = Json::object();
  if (c.rescaled) {
    RescaledOptions ro;
    ro.k = c.k;
    ro.coefficient = c.coefficient;
    ro.mode = c.mode;
    ro.eps = c.eps;
    ro.steps = c.steps;
    ro.quad_points = c.quad_points;
    RescaledResult res = evolve_rescaled(psi0, v, c.T, ro);
    psi = std::move(res.psi);
    r = res.r;
    kicks = res.kicks;
    extra["f_max1"] = res.f_max1;
  } else {
    EvolveOptions eo;
    eo.k = c.k;
    eo.coefficient = c.coefficient;
    eo.mode = c.mode;
    eo.eps = c.eps;
    eo.steps = c.steps;
    eo.h_norm = c.h_norm;
    eo.diagnostics_every = c.diagnostics_every;
    eo.diagnostics = [&](const StepDiagnostics& d) { diag.row(d.step, d.time, d.norm, d.energy); };
    EvolveResult res = evolve(psi0, v, c.T, eo);
    psi = std::move(res.psi);
    r = res.plan.r;
    kicks = res.kicks;
    estimate = res.error_estimate;
    extra["step_budget"] = res.plan.budget;
    extra["h_norm"] = res.plan.h_bound;
  }
  const double evolve_seconds = clock.seconds();

  const double drift = std::abs(psi.norm_squared() / psi0.norm_squared() - 1.0);
  Json summary;
  summary["command"] = "simulate";
  summary["grid"] = {{"eta", grid.eta()}, {"d_space", grid.d_space()}, {"n", grid.n()},
                     {"point_count", grid.point_count()}};
  summary["T"] = c.T;
  summary["k"] = c.k;
  summary["steps"] = r;
  summary["kicks"] = kicks;
  summary["rescaled"] = c.rescaled;
  summary["rng_seed"] = c.seed;
  // Rounding accumulates roughly per step; the budget is 1e-12 per 1000 steps.
  const double drift_bound = 1e-12 * std::max<double>(1.0, static_cast<double>(r) / 1000.0);
  summary["norm_drift"] = {{"value", drift}, {"bound", drift_bound}, {"within", drift <= drift_bound}};
  if (estimate) summary["richardson_estimate"] = *estimate;
  for (auto it = extra.begin(); it != extra.end(); ++it) summary[it.key()] = it.value();

  const bool fixed = c.mode == StepMode::kFixed;
  const std::optional<double> offset = constant_offset(v);
  Json error = {{"reference", nullptr}, {"value", nullptr}, {"bound", nullptr}, {"within", nullptr}};
  if (offset && c.state.kind == "plane_wave") {
    // Plane waves are kinetic eigenvectors; compare against the exact phase.
    double lambda = 0.0;
    for (int m : c.state.m) lambda += 0.5 * std::pow(2.0 * std::numbers::pi * (m - grid.n() / 2), 2);
    WaveFunction exact = psi0;
    const Complex phase = std::polar(1.0, -(lambda + *offset) * c.T);
    for (Complex& z : exact.amplitudes()) z *= phase;
    const double e = max_abs_difference(psi, exact);
    error = {{"reference", "analytic_plane_wave"}, {"metric", "max_abs"}, {"value", e}, {"bound", 1e-10},
             {"within", e <= 1e-10}};
  } else if (c.oracle == "on" || (c.oracle == "auto" && grid.point_count() <= kDenseStateCap)) {
    const WaveFunction exact = dense_reference_evolve(psi0, v, c.T);
    const double e = relative_l2_distance(psi, exact);
    error = {{"reference", "dense"}, {"metric", "relative_l2"}, {"value", e}};
    if (fixed) {
      error["bound"] = nullptr;
      error["within"] = nullptr;
    } else {
      error["bound"] = c.eps;
      error["within"] = e <= c.eps;
    }
  }
  summary["error"] = error;

  std::ostringstream snap;
  write_snapshot(snap, psi);
  out.artifacts.add("final.rsqs", snap.str());
  if (!c.rescaled) out.artifacts.add("diagnostics.csv", diag.str());
  out.artifacts.add("summary.json", dump(summary));
  out.sidecars.add("timing.json", dump(Json{{"evolve_seconds", evolve_seconds}, {"total_seconds", clock.seconds()}}));
  return out;
}

}  // namespace rsqs::cli
