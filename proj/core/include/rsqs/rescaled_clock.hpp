#pragma once

#include <vector>

#include "rsqs/lattice.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/propagate.hpp"

namespace rsqs {

// g(t) = int_0^t max_l |f(chi_l, s)| ds, tabulated on a uniform time grid.
class RescaledClock {
 public:
  RescaledClock(std::vector<double> t, std::vector<double> g);

  double total_time() const noexcept { return t_.back(); }
  double f_max1() const noexcept { return g_.back(); }
  const std::vector<double>& knot_times() const noexcept { return t_; }
  const std::vector<double>& knot_values() const noexcept { return g_; }

  double g(double t) const;
  // Smallest t with g(t) = s, by bisection over the knots then linear interpolation.
  double g_inverse(double s) const;

 private:
  std::vector<double> t_;
  std::vector<double> g_;
};

RescaledClock build_rescaled_clock(const Potential& v, double T, const GridSpec& grid,
                                   int quad_points = 1025);

struct RescaledOptions {
  int k = 1;
  SuzukiCoefficient coefficient = SuzukiCoefficient::kStandard;
  StepMode mode = StepMode::kBound;  // kAdaptive is treated as kBound
  double eps = 1e-3;
  std::optional<std::int64_t> steps;  // kFixed
  int quad_points = 1025;
  std::int64_t max_steps = std::int64_t{1} << 22;
};

struct RescaledResult {
  WaveFunction psi;
  std::int64_t r = 0;
  std::uint64_t kicks = 0;
  double f_max1 = 0.0;
  std::vector<double> slice_times;  // r + 1 boundaries in real time
};

// Steps uniform in s = g(t). Slice i covers real time [g^{-1}(s_i), g^{-1}(s_{i+1})]
// and takes one Suzuki step whose potential is sampled at g^{-1} of the slice
// midpoint in s. In bound mode r comes from plan_steps with unit rescaled
// Hamiltonian norm over rescaled duration f_max1.
RescaledResult evolve_rescaled(const WaveFunction& psi0, const Potential& v, double T,
                               const RescaledOptions& options = {});
RescaledResult evolve_rescaled(const WaveFunction& psi0, const Potential& v,
                               const RescaledClock& clock, const RescaledOptions& options);

}  // namespace rsqs
