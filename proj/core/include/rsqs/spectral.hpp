#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rsqs/lattice.hpp"

namespace rsqs {

// kForward maps Frequency -> Position (the shifted transform F^s),
// kInverse maps Position -> Frequency.
enum class TransformDirection { kForward, kInverse };

// Multi-dimensional shifted Fourier transform
//   out_l = (n+1)^{-1/2} sum_k exp(2 pi i (k - n/2) l / (n+1)) in_k   (per axis)
// computed as a node-dependent phase applied after a plain DFT. Plans are
// created once per instance; transforms of different arrays may run
// concurrently on the same instance.
class ShiftedFourier {
 public:
  explicit ShiftedFourier(const GridSpec& grid);
  ~ShiftedFourier();
  ShiftedFourier(ShiftedFourier&&) noexcept;
  ShiftedFourier& operator=(ShiftedFourier&&) noexcept;
  ShiftedFourier(const ShiftedFourier&) = delete;
  ShiftedFourier& operator=(const ShiftedFourier&) = delete;

  const GridSpec& grid() const noexcept;

  void to_position(std::span<Complex> data) const;
  void to_frequency(std::span<Complex> data) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Toggles the representation flag; throws RepresentationMismatch when the
// input is not in the representation the direction expects.
WaveFunction qsft(const WaveFunction& psi, TransformDirection direction);
void qsft_in_place(WaveFunction& psi, TransformDirection direction, const ShiftedFourier& plan);

// Eigenvalues of -1/2 Laplacian in the shifted Fourier basis:
//   lambda_k = 1/2 sum_j (2 pi (k_j - n/2))^2.
struct KineticDiagonal {
  GridSpec grid;
  std::vector<double> eigenvalues;

  double max() const;
};

KineticDiagonal kinetic_eigenvalues(const GridSpec& grid);

struct TruncationReport {
  double omega = 0.0;
  int n_closed_form = 6;  // value of the closed-form selection before verification
  int n_selected = 6;
  double bound_abs = 0.0;
  double bound_rel = 0.0;
};

// Chooses the truncation n from the regularity bound g' and tolerance eps
// in (0, 2]. The closed form n = max(2 ceil(ln w / ln ln w), 6) with
// w = 4 g' / (pi eps) is a starting point; n is then raised in steps of 2
// until (n/2)^(n/2) >= 4 g' (1 + eps/2) / (pi eps).
TruncationReport select_truncation(double g_prime, double eps, int dim = 1);

// True when (n/2)^(n/2) >= 4 g' (1 + eps/2) / (pi eps).
bool truncation_inequality_holds(int n, double g_prime, double eps);

struct SpectralBound {
  double abs_bound = 0.0;  // (2/pi) g' (n+1)^{D/2} / (n/2)^{n/2}
  double rel_bound = 0.0;  // abs / ((n+1)^{D/2} - abs)
};

SpectralBound spectral_error_bound(double g_prime, int n, int dim);

// Per-node interpolation error bound (2/pi) g' / (n/2)^{n/2}.
double nodal_error_bound(double g_prime, int n);

enum class DecayConstant {
  kSharp,   // ||f^(p)||_L1 / (2 pi k^p)
  kStated,  // ||f^(p)||_L1 / k^p
};

// Bound on |f_hat(k)| for a C^p periodic function on [-pi, pi].
double fourier_decay_bound(int p, double deriv_l1, int k, DecayConstant constant = DecayConstant::kSharp);

}  // namespace rsqs
