#include "rsqs/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {
namespace {

constexpr std::size_t kPhaseCacheLimit = 32;

void require_position(const WaveFunction& psi, const char* who) {
  if (psi.representation() != Representation::kPosition) {
    fail(ErrorCode::kRepresentationMismatch, std::string(who) + ": expected Position representation");
  }
}

}  // namespace

SuzukiOrder SuzukiOrder::make(int k, SuzukiCoefficient coefficient) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "Suzuki order k must be >= 1");
  SuzukiOrder s;
  s.k = k;
  for (int j = 2; j <= k; ++j) {
    const double root = std::pow(4.0, 1.0 / (2.0 * j - 1.0));
    s.u.push_back(coefficient == SuzukiCoefficient::kStandard ? 1.0 / (4.0 - root)
                                                              : 1.0 / (1.0 - root));
  }
  return s;
}

std::int64_t potential_exponentials_per_step(int k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "Suzuki order k must be >= 1");
  std::int64_t p = 1;
  for (int j = 1; j < k; ++j) p *= 5;
  return 2 * p + 1;
}

std::int64_t exponential_budget(int k, double h_norm, double T, double eps) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "Suzuki order k must be >= 1");
  if (!(h_norm > 0.0) || !(eps > 0.0) || !(T >= 0.0) || !std::isfinite(h_norm) ||
      !std::isfinite(T)) {
    fail(ErrorCode::kInvalidArgument, "plan_steps: h_norm and eps must be positive, T >= 0");
  }
  if (T == 0.0) return 0;
  const double inv = 1.0 / (2.0 * k);
  const double n = 4.0 * std::pow(5.0, 2.0 * k) * std::pow(2.0 * h_norm * T, 1.0 + inv) /
                   std::pow(0.5 * eps, inv);
  // Relative slack so that exact-integer budgets are not pushed up by rounding.
  const double value = std::ceil(n * (1.0 - 1e-12));
  if (!(value < 9.0e15)) fail(ErrorCode::kInvalidArgument, "plan_steps: step budget overflows");
  return static_cast<std::int64_t>(value);
}

double default_h_norm(const GridSpec& grid, double f_max) {
  const double pn = std::numbers::pi * grid.n();
  return 0.5 * grid.dim() * pn * pn + f_max;
}

StepPlan plan_steps(const SuzukiOrder& order, double h_norm, double T, double eps) {
  StepPlan plan;
  plan.order = order;
  plan.h_bound = h_norm;
  plan.budget = exponential_budget(order.k, h_norm, std::abs(T), eps);
  if (plan.budget == 0) return plan;
  plan.r = std::max<std::int64_t>(1, plan.budget / potential_exponentials_per_step(order.k));
  plan.tau = T / static_cast<double>(plan.r);
  return plan;
}

StepPlan plan_steps(int k, double h_norm, double T, double eps) {
  return plan_steps(SuzukiOrder::make(k), h_norm, T, eps);
}

SplitOperator::SplitOperator(const GridSpec& grid, Potential potential, SuzukiOrder order,
                             SplitOrdering ordering)
    : grid_(grid),
      potential_(std::move(potential)),
      order_(std::move(order)),
      ordering_(ordering),
      fourier_(grid),
      kinetic_(kinetic_eigenvalues(grid)),
      samples_(grid.point_count(), 0.0) {}

void SplitOperator::load_potential(double t) {
  if (loaded_time_ && (!potential_.time_dependent() || *loaded_time_ == t)) return;
  sample_on_nodes(potential_, grid_, t, samples_);
  loaded_time_ = t;
  potential_cache_.clear();
}

const std::vector<Complex>& SplitOperator::kinetic_factors(double tau) {
  auto it = kinetic_cache_.find(tau);
  if (it != kinetic_cache_.end()) return it->second;
  if (kinetic_cache_.size() >= kPhaseCacheLimit) kinetic_cache_.clear();
  std::vector<Complex> f(kinetic_.eigenvalues.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::polar(1.0, -tau * kinetic_.eigenvalues[i]);
  return kinetic_cache_.emplace(tau, std::move(f)).first->second;
}

const std::vector<Complex>& SplitOperator::potential_factors(double tau) {
  auto it = potential_cache_.find(tau);
  if (it != potential_cache_.end()) return it->second;
  if (potential_cache_.size() >= kPhaseCacheLimit) potential_cache_.clear();
  std::vector<Complex> f(samples_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::polar(1.0, -tau * samples_[i]);
  return potential_cache_.emplace(tau, std::move(f)).first->second;
}

void SplitOperator::kick_loaded(std::span<Complex> psi, double tau) {
  const auto& f = potential_factors(tau);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= f[i];
  ++kicks_;
}

void SplitOperator::potential_phase(std::span<Complex> psi, double t, double tau) {
  load_potential(t);
  kick_loaded(psi, tau);
}

void SplitOperator::kinetic_phase(std::span<Complex> psi, double tau) {
  if (tau == 0.0) return;
  fourier_.to_frequency(psi);
  const auto& f = kinetic_factors(tau);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= f[i];
  fourier_.to_position(psi);
}

void SplitOperator::strang_loaded(std::span<Complex> psi, double tau) {
  if (ordering_ == SplitOrdering::kVLV) {
    kick_loaded(psi, 0.5 * tau);
    kinetic_phase(psi, tau);
    kick_loaded(psi, 0.5 * tau);
  } else {
    kinetic_phase(psi, 0.5 * tau);
    kick_loaded(psi, tau);
    kinetic_phase(psi, 0.5 * tau);
  }
}

void SplitOperator::suzuki(std::span<Complex> psi, int level, double tau) {
  if (level == 1) {
    strang_loaded(psi, tau);
    return;
  }
  const double u = order_.coeff(level);
  suzuki(psi, level - 1, u * tau);
  suzuki(psi, level - 1, u * tau);
  suzuki(psi, level - 1, (1.0 - 4.0 * u) * tau);
  suzuki(psi, level - 1, u * tau);
  suzuki(psi, level - 1, u * tau);
}

void SplitOperator::strang(std::span<Complex> psi, double t, double tau) {
  load_potential(t + 0.5 * tau);
  strang_loaded(psi, tau);
}

void SplitOperator::step(std::span<Complex> psi, double t, double tau) {
  load_potential(t + 0.5 * tau);
  suzuki(psi, order_.k, tau);
}

WaveFunction apply_potential_phase(const WaveFunction& psi, const Potential& v, double t,
                                   double tau) {
  require_position(psi, "apply_potential_phase");
  WaveFunction out = psi;
  auto samples = sample_on_nodes(v, psi.grid(), t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::polar(1.0, -tau * samples[i]);
  return out;
}

WaveFunction apply_kinetic_phase(const WaveFunction& psi, double tau) {
  require_position(psi, "apply_kinetic_phase");
  WaveFunction out = psi;
  SplitOperator op(psi.grid(), Potential::zero());
  op.kinetic_phase(out.amplitudes(), tau);
  return out;
}

WaveFunction strang_step(const WaveFunction& psi, const Potential& v, double t, double tau,
                         SplitOrdering ordering) {
  require_position(psi, "strang_step");
  WaveFunction out = psi;
  SplitOperator op(psi.grid(), v, SuzukiOrder::make(1), ordering);
  op.strang(out.amplitudes(), t, tau);
  return out;
}

WaveFunction suzuki_step(const WaveFunction& psi, const Potential& v, double t, double tau, int k,
                         SuzukiCoefficient coefficient) {
  require_position(psi, "suzuki_step");
  WaveFunction out = psi;
  SplitOperator op(psi.grid(), v, SuzukiOrder::make(k, coefficient));
  op.step(out.amplitudes(), t, tau);
  return out;
}

namespace {

double energy_with(const WaveFunction& psi, const Potential& v, double t,
                   const ShiftedFourier& fourier, const KineticDiagonal& kinetic) {
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0)) fail(ErrorCode::kZeroState, "energy: zero state");
  std::vector<Complex> c(psi.amplitudes().begin(), psi.amplitudes().end());
  fourier.to_frequency(c);
  double e = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) e += kinetic.eigenvalues[i] * std::norm(c[i]);
  const auto f = sample_on_nodes(v, psi.grid(), t);
  for (std::size_t i = 0; i < c.size(); ++i) e += f[i] * std::norm(psi[i]);
  return e / n2;
}

// r uniform steps of tau = T / r.
WaveFunction run_uniform(SplitOperator& op, const WaveFunction& psi0, double T, std::int64_t r,
                         const EvolveOptions& options) {
  WaveFunction psi = psi0;
  if (r == 0) return psi;
  const double tau = T / static_cast<double>(r);
  auto report = [&](std::int64_t i) {
    if (!options.diagnostics) return;
    const std::int64_t every = std::max<std::int64_t>(1, options.diagnostics_every);
    if (i % every != 0 && i != r) return;
    const double t = i == r ? T : static_cast<double>(i) * tau;
    options.diagnostics(StepDiagnostics{i, t, psi.norm(),
                                        energy_with(psi, op.potential(), t, op.fourier(), op.kinetic())});
  };
  report(0);
  for (std::int64_t i = 0; i < r; ++i) {
    op.step(psi.amplitudes(), static_cast<double>(i) * tau, tau);
    report(i + 1);
  }
  if (!std::isfinite(psi.norm())) fail(ErrorCode::kNonFinite, "evolve: state became non-finite");
  return psi;
}

}  // namespace

double energy(const WaveFunction& psi, const Potential& v, double t) {
  require_position(psi, "energy");
  ShiftedFourier fourier(psi.grid());
  return energy_with(psi, v, t, fourier, kinetic_eigenvalues(psi.grid()));
}

EvolveResult evolve(const WaveFunction& psi0, const Potential& v, double T,
                    const EvolveOptions& options) {
  require_position(psi0, "evolve");
  if (!std::isfinite(T)) fail(ErrorCode::kInvalidArgument, "evolve: T must be finite");
  const SuzukiOrder order = SuzukiOrder::make(options.k, options.coefficient);
  SplitOperator op(psi0.grid(), v, order);

  StepPlan plan;
  plan.order = order;
  switch (options.mode) {
    case StepMode::kBound: {
      double h = 0.0;
      if (options.h_norm) {
        h = *options.h_norm;
      } else {
        double f_max = max_norm_on_nodes(v, psi0.grid(), 0.0);
        if (v.time_dependent()) f_max = std::max(f_max, max_norm_on_nodes(v, psi0.grid(), T));
        h = default_h_norm(psi0.grid(), f_max);
      }
      plan = plan_steps(order, h, T, options.eps);
      if (plan.r > options.max_steps) {
        fail(ErrorCode::kInvalidArgument,
             "evolve: planned step count " + std::to_string(plan.r) + " exceeds max_steps");
      }
      break;
    }
    case StepMode::kFixed: {
      if (!options.steps || *options.steps < 0) {
        fail(ErrorCode::kInvalidArgument, "evolve: fixed mode needs a non-negative step count");
      }
      plan.r = T == 0.0 ? 0 : std::max<std::int64_t>(1, *options.steps);
      plan.tau = plan.r > 0 ? T / static_cast<double>(plan.r) : 0.0;
      break;
    }
    case StepMode::kAdaptive: {
      if (!(options.eps > 0.0)) fail(ErrorCode::kInvalidArgument, "evolve: eps must be positive");
      EvolveOptions quiet = options;
      quiet.diagnostics = nullptr;
      std::int64_t r = std::max<std::int64_t>(1, options.steps.value_or(1));
      WaveFunction coarse = run_uniform(op, psi0, T, r, quiet);
      while (true) {
        if (2 * r > options.max_steps) {
          fail(ErrorCode::kInvalidArgument, "evolve: adaptive refinement exceeded max_steps");
        }
        WaveFunction fine = run_uniform(op, psi0, T, 2 * r, quiet);
        const double diff = relative_l2_distance(coarse, fine);
        if (diff < options.eps || T == 0.0) {
          plan.r = 2 * r;
          plan.tau = T / static_cast<double>(plan.r);
          EvolveResult result{std::move(fine), plan, op.kicks(), {}};
          result.error_estimate = diff / (std::pow(2.0, 2 * order.k) - 1.0);
          return result;
        }
        coarse = std::move(fine);
        r *= 2;
      }
    }
  }
  WaveFunction psi = run_uniform(op, psi0, T, plan.r, options);
  return EvolveResult{std::move(psi), plan, op.kicks(), {}};
}

}  // namespace rsqs
