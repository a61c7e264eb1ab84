#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsqs/lattice.hpp"
#include "rsqs/rng.hpp"

namespace rsqs {

struct ObjectiveSpec {
  std::string name;
  int dim = 0;
  std::function<double(std::span<const double>)> f;
  // When non-empty, f(x) = sum_i axis_terms[i](x_i) and the simulation factorizes.
  std::vector<std::function<double(double)>> axis_terms;
  double ell = 1.0;            // gradient Lipschitz constant
  double rho = 1.0;            // Hessian Lipschitz constant
  double gap = 1.0;            // f(x0) - f* estimate
  double domain_radius = 1.0;  // M
  std::vector<double> x0;

  bool separable() const noexcept { return !axis_terms.empty(); }
  double operator()(std::span<const double> x) const { return f(x); }
  void validate() const;
};

enum class PerturbationScale {
  kDimensional,  // |Delta| = (2/3) sqrt(eps / rho)
  kPrinted,      // |Delta| = (2/3) sqrt(rho / eps)
};

struct SimulationSpec {
  int n = 64;                       // truncation per axis
  double dt = 0.02;                 // Suzuki step in simulation time
  int k = 1;                        // Suzuki order parameter
  double mollifier_fraction = 0.1;  // cosine taper width per axis side
};

struct EscapeConfig {
  double eps = 1e-2;
  double c_r = 0.1;
  std::optional<double> r0;        // default c_r * M
  std::optional<double> t_prime;   // default escape_time(ell, rho, eps, d, gap)
  std::optional<double> eta_step;  // default 1 / ell
  std::int64_t max_iters = 10000;
  std::uint64_t seed = 0;
  PerturbationScale perturbation = PerturbationScale::kDimensional;
  SimulationSpec simulation;
  bool record_trace = true;
};

// Packet at center with |Phi|^2 a Gaussian of per-axis variance r0^2,
// distances measured to the nearest periodic image, normalize_discrete applied.
// Throws PacketUnresolved when r0 < 3 grid spacings.
WaveFunction gaussian_packet(const GridSpec& grid, std::span<const double> center, double r0);

struct PositionMoments {
  std::vector<double> mean;
  std::vector<double> variance;
};

// Per-axis moments of |psi|^2 over nodes, using the periodic image nearest `origin`.
PositionMoments position_moments(const WaveFunction& psi, std::span<const double> origin);

// (8 / (rho eps)^{1/4}) ln((ell gap / (eps^2 sqrt(rho))) (d + 2 ln(3 gap / eps^{1.5}))).
double escape_time(double ell, double rho, double eps, int d, double gap);

// |Delta| for the configured scale.
double perturbation_radius(double rho, double eps, PerturbationScale scale);

// Simulation of the gradient-shifted objective in the frame y = (x - x_t) / r0
// on the box |y_i| <= M / r0, mapped onto the unit grid. Full grid holds one
// WaveFunction; separable mode holds one 1D WaveFunction per axis.
struct PacketSimulation {
  std::vector<WaveFunction> factors;
  bool separable = false;
  double half_width = 10.0;  // box half-width in y
  double r0 = 0.1;
  double t_prime = 0.0;
  std::int64_t steps = 0;
  std::vector<double> x_t;

  // Maps a unit-grid coordinate on one axis to x.
  double to_x(int axis, double z) const;
};

PacketSimulation simulate_packet(const ObjectiveSpec& obj, std::span<const double> x_t, double r0,
                                 double t_prime, const SimulationSpec& sim, bool use_separable);

// Inverse-CDF draw of one node from |Phi|^2; returns the position in x.
std::vector<double> sample_position(const PacketSimulation& sim, CounterRng& rng);

// Evolves and samples; returns xi = sample - x_t.
std::vector<double> quantum_sim_sample(const ObjectiveSpec& obj, std::span<const double> x_t,
                                       double r0, double t_prime, const SimulationSpec& sim,
                                       CounterRng& rng);

// Central differences, default h = sqrt(machine eps) * max(1, |x|).
std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> x,
                                         std::optional<double> h = std::nullopt);
// Symmetrized central-difference Jacobian of the finite-difference gradient.
std::vector<double> finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x,
                                        std::optional<double> h = std::nullopt);
double min_eigenvalue(std::span<const double> symmetric, int d);

struct PgdTraceRow {
  std::int64_t iter = 0;
  double grad_norm = 0.0;
  double f = 0.0;
  std::int64_t sim_calls = 0;
  double t_prime = 0.0;
};

struct SimulationCall {
  std::int64_t iter = 0;
  double t_prime = 0.0;
  std::vector<double> xi;
  std::vector<double> delta;
  int sign = 1;  // +1 if x + delta was kept
  double f_plus = 0.0;
  double f_minus = 0.0;
};

struct PgdResult {
  std::vector<double> x;
  bool certified = false;
  bool max_iters_exceeded = false;
  std::int64_t iterations = 0;
  double grad_norm = 0.0;
  double lambda_min = 0.0;
  double f = 0.0;
  double t_prime = 0.0;
  double r0 = 0.0;
  std::vector<PgdTraceRow> trace;
  std::vector<SimulationCall> calls;
};

// Perturbed gradient descent with simulation-sampled escape directions.
PgdResult pgd_qs(const ObjectiveSpec& obj, const EscapeConfig& cfg);

// Built-in objectives.
ObjectiveSpec double_well();                          // x1^2 + (x2^2 - 1)^2
ObjectiveSpec quadratic_saddle(int d, double lambda);  // 1/2 lambda (sum_{i<d} x_i^2 - x_d^2)
ObjectiveSpec convex_quadratic(int d);                // 1/2 |x|^2
ObjectiveSpec rosenbrock_like();                      // (1 - x1)^2 + 10 (x2 - x1^2)^2
ObjectiveSpec separable_double_well(int d);           // (x1^2 - 1)^2 + sum_{i>1} x_i^2
// Looks up a built-in objective by name; dim is ignored by fixed-dimension objectives.
ObjectiveSpec objective_by_name(const std::string& name, int dim);

}  // namespace rsqs
