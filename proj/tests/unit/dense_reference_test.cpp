#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsqs/dense_reference.hpp"
#include "rsqs/propagate.hpp"
#include "test_support.hpp"

namespace rsqs {
namespace {

using testing::code_of;

TEST(DenseReference, ShiftedDftIsUnitary) {
  for (int n : {2, 6, 16}) {
    const Eigen::MatrixXcd f = dense_shifted_dft_1d(n);
    EXPECT_LE((f * f.adjoint() - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(DenseReference, HamiltonianIsHermitian) {
  const GridSpec g = make_grid(1, 2, 8);
  const Potential v = Potential::harmonic(3.0, {0.4, 0.6});
  const Eigen::MatrixXcd h = dense_hamiltonian(g, v, 0.0);
  EXPECT_LE((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * h.cwiseAbs().maxCoeff());
}

TEST(DenseReference, FreeEvolutionMatchesKineticPhase) {
  const GridSpec g = make_grid(1, 2, 10);
  const WaveFunction psi = testing::random_state(g, 9);
  const WaveFunction a = dense_reference_evolve(psi, Potential::zero(), 0.021);
  EXPECT_LE(max_abs_difference(a, apply_kinetic_phase(psi, 0.021)), 1e-11);
}

TEST(DenseReference, UnitaryEvolution) {
  const GridSpec g = make_grid(1, 1, 20);
  const WaveFunction psi = testing::random_state(g, 10);
  const WaveFunction out = dense_reference_evolve(psi, Potential::harmonic(50.0, {0.5}), 0.7);
  EXPECT_NEAR(out.norm(), psi.norm(), 1e-10 * psi.norm());
}

TEST(DenseReference, TimeDependentSpatiallyConstantPotential) {
  // H = L + c(t) I commutes with itself at all times: exact phase exp(-i int c).
  const GridSpec g = make_grid(1, 1, 12);
  const WaveFunction psi = testing::random_state(g, 11);
  const Potential v = Potential::callable([](std::span<const double>, double t) { return 40.0 * std::sin(3.0 * t); }, true);
  const double T = 0.8;
  const WaveFunction out = dense_reference_evolve(psi, v, T);
  const double integral = 40.0 * (1.0 - std::cos(3.0 * T)) / 3.0;
  WaveFunction expected = apply_kinetic_phase(psi, T);
  for (std::size_t i = 0; i < expected.size(); ++i) expected[i] *= std::polar(1.0, -integral);
  EXPECT_LE(max_abs_difference(out, expected), 1e-9);
}

TEST(DenseReference, MagnusSubstepsConverge) {
  const GridSpec g = make_grid(1, 1, 12);
  const WaveFunction psi = testing::smooth_state(g);
  const Potential v = Potential::callable(
      [](std::span<const double> x, double t) {
        return (1.0 + 4.0 * t) * 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * (x[0] - 0.5)));
      },
      true);
  const WaveFunction coarse = dense_reference_evolve(psi, v, 0.5, DenseOptions{16});
  const WaveFunction fine = dense_reference_evolve(psi, v, 0.5, DenseOptions{32});
  const WaveFunction finest = dense_reference_evolve(psi, v, 0.5, DenseOptions{4096});
  const double e1 = relative_l2_distance(coarse, finest);
  const double e2 = relative_l2_distance(fine, finest);
  EXPECT_LT(e2, e1 / 8.0);  // fourth order: about 16x per halving
  EXPECT_LE(relative_l2_distance(dense_reference_evolve(psi, v, 0.5), finest), 1e-8);
}

TEST(DenseReference, SizeCap) {
  const GridSpec g = make_grid(1, 2, 64);
  const WaveFunction psi(g, Representation::kPosition);
  EXPECT_EQ(code_of([&] { dense_reference_evolve(psi, Potential::zero(), 1.0); }),
            ErrorCode::kTooLargeForDense);
  EXPECT_EQ(code_of([&] { dense_hamiltonian(g, Potential::zero(), 0.0); }), ErrorCode::kTooLargeForDense);
}

}  // namespace
}  // namespace rsqs
