#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsqs/dense_reference.hpp"
#include "rsqs/rescaled_clock.hpp"
#include "test_support.hpp"

namespace rsqs {
namespace {

using testing::code_of;

Potential well(double v0) {
  return Potential::callable(
      [v0](std::span<const double> x, double) {
        return v0 * (1.0 - std::cos(2.0 * std::numbers::pi * (x[0] - 0.5)));
      },
      false);
}

TEST(RescaledClock, ConstantNormIsLinear) {
  const GridSpec g = make_grid(1, 1, 8);
  const RescaledClock c = build_rescaled_clock(Potential::constant(-3.0), 2.0, g, 11);
  EXPECT_NEAR(c.f_max1(), 6.0, 1e-14);
  for (double t : {0.0, 0.3, 1.0, 1.77, 2.0}) EXPECT_NEAR(c.g(t), 3.0 * t, 1e-14);
}

TEST(RescaledClock, InverseProperty) {
  const GridSpec g = make_grid(1, 1, 8);
  const Potential v = Potential::callable(
      [](std::span<const double> x, double t) { return (1.0 + 5.0 * t * t) * x[0]; }, true);
  const double T = 1.5;
  const RescaledClock c = build_rescaled_clock(v, T, g, 257);
  CounterRng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double t = T * rng.uniform();
    EXPECT_NEAR(c.g_inverse(c.g(t)), t, 1e-8 * T);
    const double s = c.f_max1() * rng.uniform();
    EXPECT_NEAR(c.g(c.g_inverse(s)), s, 1e-10 * c.f_max1());
  }
  EXPECT_EQ(c.g(0.0), 0.0);
  for (std::size_t i = 1; i < c.knot_values().size(); ++i) {
    EXPECT_GT(c.knot_values()[i], c.knot_values()[i - 1]);
  }
}

TEST(RescaledClock, PiecewiseConstantIntegral) {
  const GridSpec g = make_grid(1, 1, 8);
  const double T = 2.0;
  const Potential v0 = well(1.0);
  const double v0_max = max_norm_on_nodes(v0, g, 0.0);
  const Potential v = Potential::callable(
      [T](std::span<const double> x, double t) {
        return (t > T / 2 ? 10.0 : 1.0) * (1.0 - std::cos(2.0 * std::numbers::pi * (x[0] - 0.5)));
      },
      true);
  // An even number of intervals puts a knot on the jump; the trapezoid then
  // only smears one interval.
  const RescaledClock c = build_rescaled_clock(v, T, g, 20001);
  EXPECT_NEAR(c.f_max1(), 5.5 * v0_max * T, 1e-3 * 5.5 * v0_max * T);
}

TEST(RescaledClock, Errors) {
  const GridSpec g = make_grid(1, 1, 8);
  const Potential inf = Potential::callable(
      [](std::span<const double>, double t) { return t > 0.5 ? 1e308 * 10.0 : 1.0; }, true);
  EXPECT_EQ(code_of([&] { build_rescaled_clock(inf, 1.0, g, 5); }), ErrorCode::kNonFiniteNorm);
  EXPECT_EQ(code_of([&] { build_rescaled_clock(Potential::zero(), 1.0, g, 1); }), ErrorCode::kInvalidArgument);
  const WaveFunction psi = testing::smooth_state(g);
  EXPECT_EQ(code_of([&] { evolve_rescaled(psi, Potential::zero(), 1.0); }), ErrorCode::kClockNotMonotone);
  EXPECT_EQ(code_of([] { RescaledClock({0.0, 1.0}, {1.0, 0.5}); }), ErrorCode::kClockNotMonotone);
}

TEST(EvolveRescaled, TimeIndependentEqualsEvolve) {
  const GridSpec g = make_grid(1, 1, 16);
  const WaveFunction psi = testing::smooth_state(g, 1.0, 0.4);
  const Potential v = well(15.0);
  for (int k = 1; k <= 2; ++k) {
    RescaledOptions ro;
    ro.mode = StepMode::kFixed;
    ro.steps = 200;
    ro.k = k;
    EvolveOptions eo;
    eo.mode = StepMode::kFixed;
    eo.steps = 200;
    eo.k = k;
    const RescaledResult a = evolve_rescaled(psi, v, 0.5, ro);
    const EvolveResult b = evolve(psi, v, 0.5, eo);
    EXPECT_LE(max_abs_difference(a.psi, b.psi), 1e-12);
    EXPECT_EQ(a.kicks, b.kicks);
  }
}

TEST(EvolveRescaled, SlicesCarryEqualL1Mass) {
  const GridSpec g = make_grid(1, 1, 12);
  const double T = 1.0;
  const Potential v = Potential::callable(
      [](std::span<const double> x, double t) {
        const double burst = 1.0 + 99.0 * std::exp(-std::pow((t - 0.5) / 0.05, 2));
        return burst * (1.0 - std::cos(2.0 * std::numbers::pi * (x[0] - 0.5)));
      },
      true);
  const RescaledClock clock = build_rescaled_clock(v, T, g, 4001);
  RescaledOptions opt;
  opt.mode = StepMode::kFixed;
  opt.steps = 50;
  const RescaledResult r = evolve_rescaled(testing::smooth_state(g), v, clock, opt);
  ASSERT_EQ(r.slice_times.size(), 51u);
  const double ds = clock.f_max1() / 50;
  for (int i = 0; i < 50; ++i) {
    EXPECT_NEAR(clock.g(r.slice_times[i + 1]) - clock.g(r.slice_times[i]), ds, 1e-9 * clock.f_max1());
  }
  // Slices are narrowest at the burst.
  double narrow = 1e9;
  double narrow_t = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double w = r.slice_times[i + 1] - r.slice_times[i];
    if (w < narrow) {
      narrow = w;
      narrow_t = r.slice_times[i];
    }
  }
  EXPECT_NEAR(narrow_t, 0.5, 0.05);
  // Midpoint sampling makes the time quadrature second order regardless of k.
  const WaveFunction ref = dense_reference_evolve(testing::smooth_state(g), v, T, DenseOptions{4000});
  RescaledOptions fine = opt;
  fine.k = 2;
  fine.steps = 800;
  const double e800 = relative_l2_distance(evolve_rescaled(testing::smooth_state(g), v, clock, fine).psi, ref);
  fine.steps = 1600;
  const double e1600 = relative_l2_distance(evolve_rescaled(testing::smooth_state(g), v, clock, fine).psi, ref);
  EXPECT_NEAR(std::log2(e800 / e1600), 2.0, 0.2);
  EXPECT_LE(e1600, 2e-4);
}

}  // namespace
}  // namespace rsqs
