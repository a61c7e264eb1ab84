#pragma once

#include <Eigen/Dense>

#include "rsqs/lattice.hpp"
#include "rsqs/potentials.hpp"

namespace rsqs {

inline constexpr std::size_t kDenseStateCap = 4096;

// Unitary shifted DFT on one axis: F[l][k] = (n+1)^{-1/2} exp(2 pi i (k - n/2) l / (n+1)).
Eigen::MatrixXcd dense_shifted_dft_1d(int n);

// Position-space Hamiltonian F Lambda F^dagger + diag f(chi, t), assembled
// from explicit dense matrices (no FFT). Throws TooLargeForDense above the cap.
Eigen::MatrixXcd dense_hamiltonian(const GridSpec& grid, const Potential& v, double t);

struct DenseOptions {
  // Magnus sub-steps for time-dependent potentials; 0 picks from T and ||H||.
  int substeps = 0;
};

// exp(-i H T) psi0 by eigendecomposition; time-dependent potentials use
// fourth-order Magnus sub-steps with two Gauss-point samples each.
WaveFunction dense_reference_evolve(const WaveFunction& psi0, const Potential& v, double T,
                                    const DenseOptions& options = {});

}  // namespace rsqs
