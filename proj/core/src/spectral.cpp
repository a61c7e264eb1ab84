#include "rsqs/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct ShiftedFourier::Impl {
  GridSpec grid;
  fftw_plan plus = nullptr;   // exp(+2 pi i k l / m)
  fftw_plan minus = nullptr;  // exp(-2 pi i k l / m)
  std::vector<Complex> axis_shift;  // exp(-pi i n l / (n+1))
  double scale = 1.0;

  explicit Impl(const GridSpec& g) : grid(g) {
    const int dim = g.dim();
    const int m = g.axis_points();
    std::vector<int> dims(static_cast<std::size_t>(dim), m);
    std::vector<Complex> scratch(g.point_count());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      plus = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_BACKWARD, flags);
      minus = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_FORWARD, flags);
    }
    if (plus == nullptr || minus == nullptr) {
      fail(ErrorCode::kInvalidArgument, "FFTW could not plan the transform");
    }
    axis_shift.resize(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      const double phase = -std::numbers::pi * g.n() * l / m;
      axis_shift[l] = std::polar(1.0, phase);
    }
    scale = std::pow(static_cast<double>(m), -0.5 * dim);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plus != nullptr) fftw_destroy_plan(plus);
    if (minus != nullptr) fftw_destroy_plan(minus);
  }

  // Multiplies entry l by scale * prod_j shift(l_j), conjugated if requested.
  void apply_shift(std::span<Complex> data, bool conjugate) const {
    const int dim = grid.dim();
    const int m = grid.axis_points();
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    // partial[a] = scale * prod_{j<=a} shift(idx_j); refreshed from the
    // highest changed axis downwards.
    std::vector<Complex> partial(static_cast<std::size_t>(dim) + 1);
    partial[0] = Complex{scale, 0.0};
    auto factor = [&](int l) { return conjugate ? std::conj(axis_shift[l]) : axis_shift[l]; };
    for (int a = 0; a < dim; ++a) partial[a + 1] = partial[a] * factor(0);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
      data[flat] *= partial[dim];
      int a = dim - 1;
      for (; a >= 0; --a) {
        if (++idx[a] < m) break;
        idx[a] = 0;
      }
      if (a < 0) break;
      for (int b = a; b < dim; ++b) partial[b + 1] = partial[b] * factor(idx[b]);
    }
  }
};

ShiftedFourier::ShiftedFourier(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}
ShiftedFourier::~ShiftedFourier() = default;
ShiftedFourier::ShiftedFourier(ShiftedFourier&&) noexcept = default;
ShiftedFourier& ShiftedFourier::operator=(ShiftedFourier&&) noexcept = default;

const GridSpec& ShiftedFourier::grid() const noexcept { return impl_->grid; }

void ShiftedFourier::to_position(std::span<Complex> data) const {
  if (data.size() != impl_->grid.point_count()) {
    fail(ErrorCode::kInvalidArgument, "transform size mismatch");
  }
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->plus, p, p);
  impl_->apply_shift(data, /*conjugate=*/false);
}

void ShiftedFourier::to_frequency(std::span<Complex> data) const {
  if (data.size() != impl_->grid.point_count()) {
    fail(ErrorCode::kInvalidArgument, "transform size mismatch");
  }
  impl_->apply_shift(data, /*conjugate=*/true);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->minus, p, p);
}

void qsft_in_place(WaveFunction& psi, TransformDirection direction, const ShiftedFourier& plan) {
  if (direction == TransformDirection::kForward) {
    if (psi.representation() != Representation::kFrequency) {
      fail(ErrorCode::kRepresentationMismatch, "forward transform expects a Frequency state");
    }
    plan.to_position(psi.amplitudes());
    psi.set_representation(Representation::kPosition);
  } else {
    if (psi.representation() != Representation::kPosition) {
      fail(ErrorCode::kRepresentationMismatch, "inverse transform expects a Position state");
    }
    plan.to_frequency(psi.amplitudes());
    psi.set_representation(Representation::kFrequency);
  }
}

WaveFunction qsft(const WaveFunction& psi, TransformDirection direction) {
  ShiftedFourier plan(psi.grid());
  WaveFunction out = psi;
  qsft_in_place(out, direction, plan);
  return out;
}

double KineticDiagonal::max() const {
  return eigenvalues.empty() ? 0.0 : *std::max_element(eigenvalues.begin(), eigenvalues.end());
}

KineticDiagonal kinetic_eigenvalues(const GridSpec& grid) {
  const int m = grid.axis_points();
  std::vector<double> axis(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double w = 2.0 * std::numbers::pi * (k - grid.n() / 2);
    axis[k] = 0.5 * w * w;
  }
  KineticDiagonal out{grid, std::vector<double>(grid.point_count(), 0.0)};
  const int dim = grid.dim();
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t flat = 0; flat < grid.point_count(); ++flat) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += axis[idx[a]];
    out.eigenvalues[flat] = s;
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < m) break;
      idx[a] = 0;
    }
  }
  return out;
}

bool truncation_inequality_holds(int n, double g_prime, double eps) {
  const double half = 0.5 * n;
  const double lhs_log = half * std::log(half);
  const double rhs = 4.0 * g_prime * (1.0 + 0.5 * eps) / (std::numbers::pi * eps);
  if (rhs <= 0.0) return true;
  return lhs_log >= std::log(rhs);
}

TruncationReport select_truncation(double g_prime, double eps, int dim) {
  if (!(eps > 0.0) || eps > 2.0) {
    fail(ErrorCode::kInvalidTolerance, "eps must lie in (0, 2]");
  }
  if (!(g_prime > 0.0) || !std::isfinite(g_prime)) {
    fail(ErrorCode::kInvalidTolerance, "g' must be positive and finite");
  }
  TruncationReport r;
  r.omega = 4.0 * g_prime / (std::numbers::pi * eps);
  int n = 6;
  if (r.omega > std::exp(std::numbers::e)) {
    const double ratio = std::log(r.omega) / std::log(std::log(r.omega));
    n = std::max(2 * static_cast<int>(std::ceil(ratio)), 6);
  }
  r.n_closed_form = n;
  while (!truncation_inequality_holds(n, g_prime, eps)) n += 2;
  r.n_selected = n;
  const SpectralBound b = spectral_error_bound(g_prime, n, dim);
  r.bound_abs = b.abs_bound;
  r.bound_rel = b.rel_bound;
  return r;
}

double nodal_error_bound(double g_prime, int n) {
  const double half = 0.5 * n;
  return 2.0 / std::numbers::pi * g_prime * std::exp(-half * std::log(half));
}

SpectralBound spectral_error_bound(double g_prime, int n, int dim) {
  if (n < 6 || n % 2 != 0) fail(ErrorCode::kInvalidArgument, "n must be even and >= 6");
  if (g_prime < 0.0) fail(ErrorCode::kInvalidArgument, "g' must be non-negative");
  SpectralBound b;
  const double root = std::pow(n + 1.0, 0.5 * dim);
  b.abs_bound = nodal_error_bound(g_prime, n) * root;
  if (b.abs_bound >= root) {
    fail(ErrorCode::kBoundDiverges, "absolute bound reaches the state norm (n+1)^{D/2}");
  }
  b.rel_bound = b.abs_bound / (root - b.abs_bound);
  return b;
}

double fourier_decay_bound(int p, double deriv_l1, int k, DecayConstant constant) {
  if (p < 2 || k < 1) fail(ErrorCode::kInvalidArgument, "need p >= 2 and k >= 1");
  const double kp = std::pow(static_cast<double>(k), p);
  return constant == DecayConstant::kSharp ? deriv_l1 / (2.0 * std::numbers::pi * kp)
                                           : deriv_l1 / kp;
}

}  // namespace rsqs
