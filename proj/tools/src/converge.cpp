#include <cmath>
#include <limits>
#include <numbers>

#include "common.hpp"
#include "rsqs/dense_reference.hpp"
#include "rsqs/parallel.hpp"
#include "rsqs/spectral.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

namespace {

// Absolute floor below which disagreement is attributed to float64 rounding.
constexpr double kFloatFloor = 1e-12;

// Shifted Fourier coefficients c_k of node values u_j, so that
// u(x) = sum_k c_k exp(2 pi i (k - n/2) x) interpolates the nodes.
std::vector<Complex> fourier_coefficients(const WaveFunction& u) {
  const int n = u.grid().n();
  const int m = n + 1;
  std::vector<Complex> c(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j) {
      s += u[j] * std::polar(1.0, -2.0 * std::numbers::pi * (k - n / 2) * j / m);
    }
    c[k] = s / static_cast<double>(m);
  }
  return c;
}

Complex interpolate(const std::vector<Complex>& c, double x) {
  const int n = static_cast<int>(c.size()) - 1;
  Complex s = 0.0;
  for (int k = 0; k <= n; ++k) s += c[k] * std::polar(1.0, 2.0 * std::numbers::pi * (k - n / 2) * x);
  return s;
}

// sup-norm bound on the p-th derivative from the coefficient spectrum; on the
// unit interval it also bounds the L1 norm.
double derivative_bound(const std::vector<Complex>& c, int p) {
  const int n = static_cast<int>(c.size()) - 1;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const int freq = std::abs(k - n / 2);
    if (freq == 0) continue;
    s += std::abs(c[k]) * std::pow(2.0 * std::numbers::pi * freq, p);
  }
  return s;
}

}  // namespace

CommandResult run_converge(const Json& config, std::optional<std::uint64_t> cli_seed) {
  const Section root(config, "config");
  StateConfig state = parse_state(root.object("instance"));
  state.normalize = false;
  const Json potential_json = root.has("potential") ? root.raw("potential") : Json{{"kind", "zero"}};
  const double T = root.number("T");
  std::vector<std::int64_t> ns;
  if (root.has("n_values")) {
    ns = root.integers("n_values");
  } else {
    const std::int64_t lo = root.integer("n_min", 6);
    const std::int64_t hi = root.integer("n_max", 32);
    for (std::int64_t n = lo; n <= hi; n += 2) ns.push_back(n);
  }
  const int reference_n = static_cast<int>(root.integer("reference_n", 256));
  std::optional<double> fixed_g;
  if (root.has("g_prime")) {
    const Json& g = root.raw("g_prime");
    if (g.is_number()) {
      fixed_g = g.get<double>();
      if (*fixed_g < 0.0) throw ConfigError("config.g_prime: must be non-negative");
    } else if (!(g.is_string() && g.get<std::string>() == "auto")) {
      throw ConfigError("config.g_prime: expected a number or \"auto\"");
    }
  }
  const int time_samples = static_cast<int>(root.integer("g_prime_time_samples", 8));
  const std::uint64_t seed = resolve_seed(root, cli_seed);
  root.finish();
  if (ns.empty()) throw ConfigError("config: empty n sweep");
  for (std::int64_t n : ns) {
    if (n < 6 || n % 2 != 0 || n >= reference_n) {
      throw ConfigError("config: every n must be even, >= 6 and below reference_n");
    }
  }
  if (time_samples < 1) throw ConfigError("config.g_prime_time_samples: must be >= 1");

  const GridSpec ref_grid = make_grid(1, 1, reference_n);
  const Potential v = parse_potential(Section(potential_json, "config.potential"), 1);

  Stopwatch clock;
  const WaveFunction ref0 = make_state(state, ref_grid, seed);
  const WaveFunction refT = dense_reference_evolve(ref0, v, T);
  const std::vector<Complex> ref_coeffs = fourier_coefficients(refT);

  // Spectra over a time sample feed the automatic g' = max_t ||u^(n/2)||.
  std::vector<std::vector<Complex>> spectra;
  if (!fixed_g) {
    spectra.resize(static_cast<std::size_t>(time_samples) + 1);
    parallel_for(spectra.size(), [&](std::size_t s) {
      const double t = T * static_cast<double>(s) / time_samples;
      spectra[s] = s == spectra.size() - 1 ? ref_coeffs : fourier_coefficients(dense_reference_evolve(ref0, v, t));
    });
  }

  struct Row {
    int n = 0;
    double g_prime = 0.0;
    double error = 0.0;
    double bound = 0.0;
    bool within = true;
  };
  std::vector<Row> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    Row& row = rows[i];
    row.n = static_cast<int>(ns[i]);
    const GridSpec g = make_grid(1, 1, row.n);
    const WaveFunction coarse = dense_reference_evolve(make_state(state, g, seed), v, T);
    double err = 0.0;
    for (int l = 0; l <= row.n; ++l) {
      err = std::max(err, std::abs(coarse[l] - interpolate(ref_coeffs, l * g.spacing())));
    }
    row.error = err;
    if (fixed_g) {
      row.g_prime = *fixed_g;
    } else {
      for (const auto& sp : spectra) row.g_prime = std::max(row.g_prime, derivative_bound(sp, row.n / 2));
    }
    row.bound = nodal_error_bound(row.g_prime, row.n);
    row.within = row.error <= row.bound * (1.0 + 1e-9) + kFloatFloor;
  });

  CommandResult out;
  Csv csv({"n", "g_prime", "measured_error", "paper_bound", "within_bound"});
  Json rows_json = Json::array();
  int violations = 0;
  for (const Row& r : rows) {
    csv.row(r.n, r.g_prime, r.error, r.bound, r.within);
    rows_json.push_back({{"n", r.n}, {"g_prime", r.g_prime}, {"measured_error", r.error},
                         {"paper_bound", r.bound}, {"within_bound", r.within}});
    if (!r.within) ++violations;
  }
  Json summary = {{"command", "converge"},
                  {"T", T},
                  {"reference_n", reference_n},
                  {"g_prime_mode", fixed_g ? "user" : "auto"},
                  {"float_floor", kFloatFloor},
                  {"bound_violations", violations},
                  {"rng_seed", seed},
                  {"rows", rows_json}};
  out.artifacts.add("converge.csv", csv.str());
  out.artifacts.add("summary.json", dump(summary));
  out.sidecars.add("timing.json", dump(Json{{"total_seconds", clock.seconds()}}));
  if (violations > 0) out.exit_code = kExitRuntime;
  return out;
}

}  // namespace rsqs::cli
