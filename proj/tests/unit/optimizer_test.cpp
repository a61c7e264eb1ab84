#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsqs/optimizer.hpp"
#include "test_support.hpp"

namespace rsqs {
namespace {

using testing::code_of;

ObjectiveSpec zero_objective(int d) {
  ObjectiveSpec o;
  o.name = "zero";
  o.dim = d;
  o.axis_terms.assign(static_cast<std::size_t>(d), [](double) { return 0.0; });
  o.f = [](std::span<const double>) { return 0.0; };
  o.domain_radius = 1.0;
  o.x0.assign(static_cast<std::size_t>(d), 0.0);
  return o;
}

// Second moments of a Gaussian under -1/2 d^2 + 1/2 k y^2, integrated with RK4:
// a = <y^2>, b = <yp + py>, c = <p^2>; a' = b, b' = 2c - 2ka, c' = -kb.
double riccati_variance(double k, double var0, double t) {
  double a = var0;
  double b = 0.0;
  double c = 1.0 / (4.0 * var0);
  const int steps = 20000;
  const double h = t / steps;
  auto f = [k](double a_, double b_, double c_, double out[3]) {
    out[0] = b_;
    out[1] = 2.0 * c_ - 2.0 * k * a_;
    out[2] = -k * b_;
  };
  for (int s = 0; s < steps; ++s) {
    double k1[3], k2[3], k3[3], k4[3];
    f(a, b, c, k1);
    f(a + 0.5 * h * k1[0], b + 0.5 * h * k1[1], c + 0.5 * h * k1[2], k2);
    f(a + 0.5 * h * k2[0], b + 0.5 * h * k2[1], c + 0.5 * h * k2[2], k3);
    f(a + h * k3[0], b + h * k3[1], c + h * k3[2], k4);
    a += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    b += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    c += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
  }
  return a;
}

TEST(GaussianPacket, VarianceAndMean) {
  const GridSpec g = make_grid(1, 2, 64);
  const std::vector<double> center{0.5, 0.5};
  const double r0 = 0.05;
  const WaveFunction psi = gaussian_packet(g, center, r0);
  EXPECT_NEAR(psi.norm_squared() / g.point_count(), 1.0, 1e-10);
  const PositionMoments m = position_moments(psi, center);
  for (int a = 0; a < 2; ++a) {
    EXPECT_NEAR(m.variance[a], r0 * r0, 0.02 * r0 * r0);
    EXPECT_NEAR(m.mean[a], 0.5, 1e-10);
  }
}

TEST(GaussianPacket, Unresolved) {
  const GridSpec g = make_grid(1, 1, 16);
  EXPECT_EQ(code_of([&] { gaussian_packet(g, std::vector<double>{0.5}, 0.05); }),
            ErrorCode::kPacketUnresolved);
  EXPECT_EQ(code_of([&] { gaussian_packet(g, std::vector<double>{0.5}, -1.0); }),
            ErrorCode::kNonPositiveArg);
}

TEST(EscapeTime, Examples) {
  EXPECT_NEAR(escape_time(1, 1, 1, 1, 1), 8.0 * std::log(1.0 + 2.0 * std::log(3.0)), 1e-12);
  EXPECT_NEAR(std::exp(escape_time(1, 1, 1, 1, 1) / 8.0), 3.197, 1e-3);
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double t = escape_time(44, 48, eps, 2, 1);
    EXPECT_GT(t, prev);
    prev = t;
  }
  for (int d : {1, 2, 4, 8, 16, 32}) {
    const double pre = 8.0 / std::pow(48 * 1e-2, 0.25);
    const double delta = escape_time(44, 48, 1e-2, 2 * d, 1) - escape_time(44, 48, 1e-2, d, 1);
    EXPECT_GT(delta, 0.0);
    EXPECT_LE(delta, pre * std::log(2.0) + 1e-12);
  }
  EXPECT_EQ(code_of([] { escape_time(0, 1, 1, 1, 1); }), ErrorCode::kNonPositiveArg);
  EXPECT_EQ(code_of([] { escape_time(1, 1, 1, 0, 1); }), ErrorCode::kNonPositiveArg);
}

TEST(PerturbationRadius, BothScales) {
  EXPECT_NEAR(perturbation_radius(48, 1e-2, PerturbationScale::kDimensional), 2.0 / 3.0 * std::sqrt(1e-2 / 48), 1e-15);
  EXPECT_NEAR(perturbation_radius(48, 1e-2, PerturbationScale::kPrinted), 2.0 / 3.0 * std::sqrt(4800.0), 1e-12);
}

TEST(QuantumSim, ZeroTimeSamplesInitialGaussian) {
  const ObjectiveSpec o = zero_objective(2);
  const std::vector<double> xt{0.3, -0.2};
  const double r0 = 0.1;
  const PacketSimulation sim = simulate_packet(o, xt, r0, 0.0, SimulationSpec{}, false);
  CounterRng rng(3);
  const int n = 4000;
  double s[2] = {0, 0};
  double ss[2] = {0, 0};
  for (int i = 0; i < n; ++i) {
    const auto x = sample_position(sim, rng);
    for (int a = 0; a < 2; ++a) {
      const double xi = x[a] - xt[a];
      s[a] += xi;
      ss[a] += xi * xi;
    }
  }
  for (int a = 0; a < 2; ++a) {
    const double mean = s[a] / n;
    const double var = ss[a] / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 4.0 * r0 / std::sqrt(n));
    // Node quantization adds spacing^2 / 12 in y units, well inside the tolerance.
    EXPECT_NEAR(var, r0 * r0, 0.1 * r0 * r0);
  }
}

TEST(QuantumSim, FreeDispersionInRescaledFrame) {
  // In y = (x - x_t) / r0 the packet has unit width, so Var_x(t) = r0^2 (1 + t^2 / 4).
  const ObjectiveSpec o = zero_objective(1);
  const std::vector<double> xt{0.0};
  const double r0 = 0.1;
  for (double t : {1.0, 2.0, 3.0}) {
    const PacketSimulation sim = simulate_packet(o, xt, r0, t, SimulationSpec{}, true);
    const auto m = position_moments(sim.factors[0], std::vector<double>{0.5});
    const double var_x = m.variance[0] * std::pow(2.0 * sim.half_width * r0, 2);
    EXPECT_NEAR(var_x, r0 * r0 * (1.0 + t * t / 4.0), 0.03 * r0 * r0 * (1.0 + t * t / 4.0));
  }
}

TEST(QuantumSim, QuadraticSaddleFollowsRiccati) {
  const ObjectiveSpec o = quadratic_saddle(2, 1.0);
  const std::vector<double> xt{0.0, 0.0};
  const double r0 = 0.2;
  double prev_ratio = 0.0;
  for (double t : {0.5, 1.0, 1.5}) {
    const PacketSimulation sim = simulate_packet(o, xt, r0, t, SimulationSpec{64, 0.005, 1, 0.1}, false);
    const auto m = position_moments(sim.factors[0], std::vector<double>{0.5, 0.5});
    const double scale = std::pow(2.0 * sim.half_width, 2);
    const double v1 = m.variance[0] * scale;
    const double v2 = m.variance[1] * scale;
    EXPECT_NEAR(v1, riccati_variance(1.0, 1.0, t), 0.02 * riccati_variance(1.0, 1.0, t));
    EXPECT_NEAR(v2, riccati_variance(-1.0, 1.0, t), 0.02 * riccati_variance(-1.0, 1.0, t));
    EXPECT_GT(v2 / v1, prev_ratio);
    prev_ratio = v2 / v1;
  }
}

TEST(QuantumSim, SeparableMatchesFullGridMarginals) {
  ObjectiveSpec o = quadratic_saddle(2, 2.0);
  const std::vector<double> xt{0.1, -0.05};
  const SimulationSpec spec{64, 0.01, 1, 0.1};
  const PacketSimulation full = simulate_packet(o, xt, 0.2, 0.8, spec, false);
  const PacketSimulation sep = simulate_packet(o, xt, 0.2, 0.8, spec, true);
  const GridSpec& g = full.factors[0].grid();
  const double total = full.factors[0].norm_squared();
  std::vector<double> marg0(65, 0.0);
  std::vector<double> marg1(65, 0.0);
  std::vector<int> idx(2);
  for (std::size_t f = 0; f < g.point_count(); ++f) {
    g.multi_index(f, idx);
    const double p = std::norm(full.factors[0][f]) / total;
    marg0[idx[0]] += p;
    marg1[idx[1]] += p;
  }
  for (int l = 0; l <= 64; ++l) {
    EXPECT_NEAR(marg0[l], std::norm(sep.factors[0][l]) / sep.factors[0].norm_squared(), 1e-8);
    EXPECT_NEAR(marg1[l], std::norm(sep.factors[1][l]) / sep.factors[1].norm_squared(), 1e-8);
  }
}

TEST(QuantumSim, NegativeCurvatureDirectionDominates) {
  const ObjectiveSpec o = quadratic_saddle(2, 1.0);
  const double t_full = escape_time(o.ell, o.rho, 1e-2, 2, o.gap);
  const std::vector<double> xt{0.0, 0.0};
  const PacketSimulation sim = simulate_packet(o, xt, 0.2, 0.5 * t_full, SimulationSpec{}, false);
  CounterRng rng(5);
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto x = sample_position(sim, rng);
    s1 += x[0] * x[0];
    s2 += x[1] * x[1];
  }
  // F(29, 29) one-sided 95% quantile is about 1.86.
  EXPECT_GT(s2 / s1, 1.86);
}

TEST(FiniteDiff, GradientExamples) {
  auto half_sq = [](std::span<const double> x) { return 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
  const std::vector<double> x{0.3, -1.2, 2.5};
  const auto g = finite_diff_gradient(half_sq, x);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g[i], x[i], 1e-7);
  const auto z = finite_diff_gradient([](std::span<const double>) { return 4.2; }, x);
  for (double v : z) EXPECT_EQ(v, 0.0);
  const auto b = finite_diff_gradient([](std::span<const double> y) { return y[0] * y[1]; },
                                      std::vector<double>{1.0, 2.0});
  EXPECT_NEAR(b[0], 2.0, 1e-7);
  EXPECT_NEAR(b[1], 1.0, 1e-7);
  EXPECT_EQ(code_of([&] { finite_diff_gradient(half_sq, x, 0.0); }), ErrorCode::kNonPositiveArg);
}

TEST(FiniteDiff, HessianAndMinEigenvalue) {
  const ObjectiveSpec dw = double_well();
  const auto h0 = finite_diff_hessian(dw.f, std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(h0[0], 2.0, 1e-5);
  EXPECT_NEAR(h0[3], -4.0, 1e-5);
  EXPECT_NEAR(h0[1], 0.0, 1e-6);
  EXPECT_NEAR(min_eigenvalue(h0, 2), -4.0, 1e-5);
  const auto h1 = finite_diff_hessian(dw.f, std::vector<double>{0.0, 1.0});
  EXPECT_NEAR(min_eigenvalue(h1, 2), 2.0, 1e-5);
}

TEST(Pgd, ConvexQuadraticNeedsNoSimulation) {
  const ObjectiveSpec o = convex_quadratic(5);
  EscapeConfig cfg;
  cfg.eps = 1e-3;
  const PgdResult r = pgd_qs(o, cfg);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.calls.empty());
  double n2 = 0.0;
  for (double v : r.x) n2 += v * v;
  EXPECT_LE(std::sqrt(n2), cfg.eps * (1 + 1e-6));
}

TEST(Pgd, DoubleWellEscapesSaddle) {
  const ObjectiveSpec o = double_well();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    EscapeConfig cfg;
    cfg.seed = seed;
    const PgdResult r = pgd_qs(o, cfg);
    EXPECT_TRUE(r.certified);
    EXPECT_GE(r.calls.size(), 1u);
    EXPECT_NEAR(std::abs(r.x[1]), 1.0, 1e-2);
    EXPECT_NEAR(r.x[0], 0.0, 1e-2);
    EXPECT_GE(r.lambda_min, -std::sqrt(o.rho * cfg.eps));
    const double radius = perturbation_radius(o.rho, cfg.eps, cfg.perturbation);
    for (const SimulationCall& c : r.calls) {
      double n2 = 0.0;
      for (double v : c.delta) n2 += v * v;
      EXPECT_NEAR(std::sqrt(n2), radius, 1e-12 * radius);
      EXPECT_EQ(c.sign > 0 ? c.f_plus : c.f_minus, std::min(c.f_plus, c.f_minus));
      EXPECT_DOUBLE_EQ(c.t_prime, escape_time(o.ell, o.rho, cfg.eps, 2, o.gap));
    }
  }
}

TEST(Pgd, DeterministicForSeed) {
  const ObjectiveSpec o = separable_double_well(4);
  EscapeConfig cfg;
  cfg.seed = 11;
  const PgdResult a = pgd_qs(o, cfg);
  const PgdResult b = pgd_qs(o, cfg);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE(a.certified);
}

TEST(Pgd, MaxItersFlag) {
  const ObjectiveSpec o = rosenbrock_like();
  EscapeConfig cfg;
  cfg.max_iters = 3;
  const PgdResult r = pgd_qs(o, cfg);
  EXPECT_TRUE(r.max_iters_exceeded);
  EXPECT_FALSE(r.certified);
  EXPECT_EQ(r.trace.size(), 3u);
}

TEST(Objectives, LookupAndValidation) {
  EXPECT_EQ(objective_by_name("double_well", 0).dim, 2);
  EXPECT_EQ(objective_by_name("separable_double_well", 8).dim, 8);
  EXPECT_EQ(code_of([] { objective_by_name("nope", 2); }), ErrorCode::kInvalidArgument);
  ObjectiveSpec bad = double_well();
  bad.rho = 0.0;
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::kNonPositiveArg);
  const ObjectiveSpec dw = double_well();
  EXPECT_NEAR(dw(std::vector<double>{0.5, 0.5}), 0.25 + 0.5625, 1e-15);
}

}  // namespace
}  // namespace rsqs
