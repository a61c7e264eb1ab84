#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rsqs/lattice.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/spectral.hpp"

namespace rsqs {

enum class SuzukiCoefficient {
  kStandard,  // u_j = 1 / (4 - 4^{1/(2j-1)})
  kPrinted,   // u_j = 1 / (1 - 4^{1/(2j-1)}); fails the order condition, kept as a control
};

// Order-2k Suzuki formula S_2k(tau) = S_{2k-2}(u tau)^2 S_{2k-2}((1-4u) tau) S_{2k-2}(u tau)^2.
struct SuzukiOrder {
  int k = 1;
  std::vector<double> u;  // u[j - 2] for j = 2..k

  static SuzukiOrder make(int k, SuzukiCoefficient coefficient = SuzukiCoefficient::kStandard);
  double coeff(int j) const { return u.at(static_cast<std::size_t>(j - 2)); }
  int formula_order() const noexcept { return 2 * k; }
};

// Potential exponentials charged to one Suzuki step by the budget: 2 * 5^{k-1} + 1.
std::int64_t potential_exponentials_per_step(int k);

// N = ceil(4 * 5^{2k} (2 h T)^{1 + 1/2k} / (eps/2)^{1/2k}).
std::int64_t exponential_budget(int k, double h_norm, double T, double eps);

// 1/2 D (pi n)^2 + f_max: kinetic spectral radius plus the potential max-norm.
double default_h_norm(const GridSpec& grid, double f_max);

struct StepPlan {
  std::int64_t r = 0;
  double tau = 0.0;
  double h_bound = 0.0;
  std::int64_t budget = 0;
  SuzukiOrder order;
};

StepPlan plan_steps(const SuzukiOrder& order, double h_norm, double T, double eps);
StepPlan plan_steps(int k, double h_norm, double T, double eps);

enum class SplitOrdering {
  kVLV,  // half potential, full kinetic, half potential
  kLVL,  // half kinetic, full potential, half kinetic
};

// Split-operator propagator on one grid. Keeps FFT plans, kinetic
// eigenvalues and phase caches; not thread-safe (one instance per trajectory).
// Potential kicks inside one Suzuki step all use the potential sampled at the
// step midpoint.
class SplitOperator {
 public:
  SplitOperator(const GridSpec& grid, Potential potential, SuzukiOrder order = SuzukiOrder::make(1),
                SplitOrdering ordering = SplitOrdering::kVLV);

  const GridSpec& grid() const noexcept { return grid_; }
  const SuzukiOrder& order() const noexcept { return order_; }
  const Potential& potential() const noexcept { return potential_; }
  const ShiftedFourier& fourier() const noexcept { return fourier_; }
  const KineticDiagonal& kinetic() const noexcept { return kinetic_; }

  // psi_l *= exp(-i tau f(chi_l, t)).
  void potential_phase(std::span<Complex> psi, double t, double tau);
  // psi <- F exp(-i tau L) F^{-1} psi.
  void kinetic_phase(std::span<Complex> psi, double tau);
  // One order-2 step over [t, t + tau].
  void strang(std::span<Complex> psi, double t, double tau);
  // One order-2k step over [t, t + tau].
  void step(std::span<Complex> psi, double t, double tau);

  std::uint64_t kicks() const noexcept { return kicks_; }
  void reset_kicks() noexcept { kicks_ = 0; }

 private:
  void load_potential(double t);
  void suzuki(std::span<Complex> psi, int level, double tau);
  void strang_loaded(std::span<Complex> psi, double tau);
  void kick_loaded(std::span<Complex> psi, double tau);
  const std::vector<Complex>& kinetic_factors(double tau);
  const std::vector<Complex>& potential_factors(double tau);

  GridSpec grid_;
  Potential potential_;
  SuzukiOrder order_;
  SplitOrdering ordering_;
  ShiftedFourier fourier_;
  KineticDiagonal kinetic_;
  std::vector<double> samples_;
  std::optional<double> loaded_time_;
  std::map<double, std::vector<Complex>> kinetic_cache_;
  std::map<double, std::vector<Complex>> potential_cache_;
  std::uint64_t kicks_ = 0;
};

// Free-function forms operating on a copy.
WaveFunction apply_potential_phase(const WaveFunction& psi, const Potential& v, double t, double tau);
WaveFunction apply_kinetic_phase(const WaveFunction& psi, double tau);
WaveFunction strang_step(const WaveFunction& psi, const Potential& v, double t, double tau,
                         SplitOrdering ordering = SplitOrdering::kVLV);
WaveFunction suzuki_step(const WaveFunction& psi, const Potential& v, double t, double tau, int k,
                         SuzukiCoefficient coefficient = SuzukiCoefficient::kStandard);

struct StepDiagnostics {
  std::int64_t step = 0;
  double time = 0.0;
  double norm = 0.0;
  double energy = 0.0;
};

enum class StepMode {
  kBound,     // r from plan_steps
  kFixed,     // r given
  kAdaptive,  // double r until the Richardson estimate falls below eps
};

struct EvolveOptions {
  int k = 1;
  SuzukiCoefficient coefficient = SuzukiCoefficient::kStandard;
  StepMode mode = StepMode::kBound;
  double eps = 1e-3;
  std::optional<std::int64_t> steps;
  std::optional<double> h_norm;  // bound mode; default_h_norm when unset
  std::int64_t max_steps = std::int64_t{1} << 22;
  std::function<void(const StepDiagnostics&)> diagnostics;
  std::int64_t diagnostics_every = 1;
};

struct EvolveResult {
  WaveFunction psi;
  StepPlan plan;
  std::uint64_t kicks = 0;
  std::optional<double> error_estimate;  // adaptive mode only
};

// Position-representation evolution from t = 0 to T (T may be negative).
EvolveResult evolve(const WaveFunction& psi0, const Potential& v, double T,
                    const EvolveOptions& options = {});

// <psi|H(t)|psi> / <psi|psi>.
double energy(const WaveFunction& psi, const Potential& v, double t);

}  // namespace rsqs
