#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "rsqs/error.hpp"
#include "rsqs/lattice.hpp"
#include "rsqs/rng.hpp"

namespace rsqs::testing {

// Error code raised by fn; records a failure when nothing is thrown.
inline ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rsqs::Error";
  return ErrorCode::kInvalidArgument;
}

inline WaveFunction random_state(const GridSpec& grid, std::uint64_t seed,
                                 Representation rep = Representation::kPosition) {
  CounterRng rng(seed);
  std::vector<Complex> a(grid.point_count());
  for (auto& z : a) z = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return WaveFunction(grid, std::move(a), rep);
}

// Single shifted Fourier mode m sampled at the nodes.
inline WaveFunction plane_wave(const GridSpec& grid, int m) {
  WaveFunction psi(grid, Representation::kPosition);
  const double w = 2.0 * M_PI * (m - grid.n() / 2);
  for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
    psi[flat] = std::polar(1.0, w * x[0]);
  });
  return psi;
}

}  // namespace rsqs::testing

namespace rsqs::testing {

// Smooth periodic state exp(kappa cos(2 pi (x - c))) per axis, normalized.
inline WaveFunction smooth_state(const GridSpec& grid, double kappa = 1.0, double c = 0.5,
                                 double momentum = 0.0) {
  WaveFunction psi(grid, Representation::kPosition);
  for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
    double s = 0.0;
    double phase = 0.0;
    for (double xi : x) {
      s += kappa * std::cos(2.0 * M_PI * (xi - c));
      phase += 2.0 * M_PI * momentum * xi;
    }
    psi[flat] = std::polar(std::exp(s), phase);
  });
  return normalize_discrete(psi);
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rsqs::testing
