#include "rsqs/rescaled_clock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {

RescaledClock::RescaledClock(std::vector<double> t, std::vector<double> g)
    : t_(std::move(t)), g_(std::move(g)) {
  if (t_.size() < 2 || t_.size() != g_.size()) {
    fail(ErrorCode::kInvalidArgument, "rescaled clock needs matching knots, at least two");
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1]) || !(g_[i] >= g_[i - 1])) {
      fail(ErrorCode::kClockNotMonotone, "rescaled clock knots are not monotone");
    }
  }
}

double RescaledClock::g(double t) const {
  if (t <= t_.front()) return g_.front();
  if (t >= t_.back()) return g_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return g_[i] + w * (g_[i + 1] - g_[i]);
}

double RescaledClock::g_inverse(double s) const {
  if (s <= g_.front()) return t_.front();
  if (s >= g_.back()) return t_.back();
  // Bisection for the first knot interval [lo, hi] with g_lo < s <= g_hi.
  std::size_t lo = 0;
  std::size_t hi = g_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (g_[mid] < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double w = (s - g_[lo]) / (g_[hi] - g_[lo]);
  return t_[lo] + w * (t_[hi] - t_[lo]);
}

RescaledClock build_rescaled_clock(const Potential& v, double T, const GridSpec& grid,
                                   int quad_points) {
  if (quad_points < 2) fail(ErrorCode::kInvalidArgument, "quad_points must be >= 2");
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorCode::kInvalidArgument, "clock needs T > 0");
  const auto m = static_cast<std::size_t>(quad_points);
  std::vector<double> t(m);
  std::vector<double> norm(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = T * static_cast<double>(i) / static_cast<double>(m - 1);
    try {
      norm[i] = max_norm_on_nodes(v, grid, t[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPotentialEvalFailure) throw;
      fail(ErrorCode::kNonFiniteNorm, "potential max-norm is not finite: " + std::string(e.what()));
    }
    if (!std::isfinite(norm[i])) fail(ErrorCode::kNonFiniteNorm, "potential max-norm is not finite");
  }
  t.back() = T;
  std::vector<double> g(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) g[i] = g[i - 1] + 0.5 * (norm[i] + norm[i - 1]) * (t[i] - t[i - 1]);
  return RescaledClock(std::move(t), std::move(g));
}

RescaledResult evolve_rescaled(const WaveFunction& psi0, const Potential& v, double T,
                               const RescaledOptions& options) {
  if (T == 0.0) return RescaledResult{psi0, 0, 0, 0.0, {0.0}};
  return evolve_rescaled(psi0, v, build_rescaled_clock(v, T, psi0.grid(), options.quad_points),
                         options);
}

RescaledResult evolve_rescaled(const WaveFunction& psi0, const Potential& v,
                               const RescaledClock& clock, const RescaledOptions& options) {
  if (psi0.representation() != Representation::kPosition) {
    fail(ErrorCode::kRepresentationMismatch, "evolve_rescaled: expected Position representation");
  }
  const double total = clock.f_max1();
  if (!(total > 0.0)) {
    fail(ErrorCode::kClockNotMonotone, "evolve_rescaled: potential max-norm integrates to zero");
  }
  const SuzukiOrder order = SuzukiOrder::make(options.k, options.coefficient);
  std::int64_t r = 0;
  if (options.mode == StepMode::kFixed) {
    if (!options.steps || *options.steps < 1) {
      fail(ErrorCode::kInvalidArgument, "evolve_rescaled: fixed mode needs steps >= 1");
    }
    r = *options.steps;
  } else {
    // The interaction-picture Hamiltonian has max-norm <= 1 in rescaled time.
    r = plan_steps(order, 1.0, total, options.eps).r;
  }
  if (r > options.max_steps) fail(ErrorCode::kInvalidArgument, "evolve_rescaled: too many steps");

  SplitOperator op(psi0.grid(), v, order);
  RescaledResult out{psi0, r, 0, total, {}};
  out.slice_times.resize(static_cast<std::size_t>(r) + 1);
  const double ds = total / static_cast<double>(r);
  out.slice_times.front() = 0.0;
  for (std::int64_t i = 1; i < r; ++i) {
    out.slice_times[i] = clock.g_inverse(ds * static_cast<double>(i));
  }
  out.slice_times.back() = clock.total_time();
  for (std::int64_t i = 0; i < r; ++i) {
    const double t0 = out.slice_times[i];
    const double t1 = out.slice_times[i + 1];
    if (t1 < t0) fail(ErrorCode::kClockNotMonotone, "evolve_rescaled: slice boundaries decrease");
    const double t_mid = clock.g_inverse(ds * (static_cast<double>(i) + 0.5));
    // step() samples at t + tau/2; shift t so that point is t_mid.
    const double tau = t1 - t0;
    op.step(out.psi.amplitudes(), t_mid - 0.5 * tau, tau);
  }
  if (!std::isfinite(out.psi.norm())) fail(ErrorCode::kNonFinite, "evolve_rescaled: non-finite state");
  out.kicks = op.kicks();
  return out;
}

}  // namespace rsqs
