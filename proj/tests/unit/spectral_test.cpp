#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsqs/spectral.hpp"
#include "test_support.hpp"

namespace rsqs {
namespace {

using testing::code_of;
constexpr double kPi = std::numbers::pi;

// Direct evaluation of out_l = (n+1)^{-D/2} sum_k prod_a exp(2 pi i (k_a - n/2) l_a / (n+1)) in_k.
WaveFunction direct_shifted_transform(const WaveFunction& in) {
  const GridSpec& g = in.grid();
  const int dim = g.dim();
  const int m = g.axis_points();
  WaveFunction out(g, Representation::kPosition);
  std::vector<int> l(dim);
  std::vector<int> k(dim);
  for (std::size_t fl = 0; fl < g.point_count(); ++fl) {
    g.multi_index(fl, l);
    Complex s{0.0, 0.0};
    for (std::size_t fk = 0; fk < g.point_count(); ++fk) {
      g.multi_index(fk, k);
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += 2.0 * kPi * (k[a] - g.n() / 2) * l[a] / m;
      s += std::polar(1.0, phase) * in[fk];
    }
    out[fl] = s * std::pow(static_cast<double>(m), -0.5 * dim);
  }
  return out;
}

TEST(Qsft, SmallestExampleColumn) {
  const GridSpec g = GridSpec::make(1, 1, 2, kDefaultNodeCap, 2);
  WaveFunction e0(g, Representation::kFrequency);
  e0[0] = 1.0;
  const WaveFunction out = qsft(e0, TransformDirection::kForward);
  EXPECT_EQ(out.representation(), Representation::kPosition);
  const double s = 1.0 / std::sqrt(3.0);
  for (int l = 0; l < 3; ++l) {
    const Complex expected = std::polar(s, -2.0 * kPi * l / 3.0);
    EXPECT_NEAR(std::abs(out[l] - expected), 0.0, 1e-15) << "l=" << l;
  }
}

TEST(Qsft, MatchesDirectSumAcrossSizes) {
  for (int n = 2; n <= 16; n += 2) {
    for (int dim = 1; dim <= 2; ++dim) {
      const GridSpec g = GridSpec::make(1, dim, n, kDefaultNodeCap, 2);
      const WaveFunction in = testing::random_state(g, 100 + n, Representation::kFrequency);
      const WaveFunction fast = qsft(in, TransformDirection::kForward);
      const WaveFunction slow = direct_shifted_transform(in);
      EXPECT_LE(max_abs_difference(fast, slow), 1e-12) << "n=" << n << " D=" << dim;
    }
  }
}

TEST(Qsft, InverseAndNormPreservation) {
  const GridSpec g = make_grid(1, 3, 10);
  const WaveFunction psi = testing::random_state(g, 5);
  const WaveFunction freq = qsft(psi, TransformDirection::kInverse);
  EXPECT_NEAR(freq.norm(), psi.norm(), 1e-12 * psi.norm());
  const WaveFunction back = qsft(freq, TransformDirection::kForward);
  EXPECT_LE(max_abs_difference(back, psi), 1e-12);
  EXPECT_EQ(back.representation(), Representation::kPosition);
}

TEST(Qsft, RepresentationMismatch) {
  const GridSpec g = make_grid(1, 1, 6);
  const WaveFunction pos(g, Representation::kPosition);
  EXPECT_EQ(code_of([&] { qsft(pos, TransformDirection::kForward); }),
            ErrorCode::kRepresentationMismatch);
  const WaveFunction freq(g, Representation::kFrequency);
  EXPECT_EQ(code_of([&] { qsft(freq, TransformDirection::kInverse); }),
            ErrorCode::kRepresentationMismatch);
}

TEST(Qsft, SingleModeInverseIsUnitVector) {
  // Sampling mode m at the nodes and transforming back gives sqrt(n+1) e_m.
  const GridSpec g = make_grid(1, 1, 8);
  for (int m = 0; m <= 8; ++m) {
    const WaveFunction c = qsft(testing::plane_wave(g, m), TransformDirection::kInverse);
    for (int k = 0; k <= 8; ++k) {
      const double expected = k == m ? 3.0 : 0.0;
      EXPECT_NEAR(std::abs(c[k]), expected, 1e-12);
    }
  }
}

TEST(Kinetic, Examples) {
  const GridSpec g1 = GridSpec::make(1, 1, 4, kDefaultNodeCap, 2);
  const KineticDiagonal k1 = kinetic_eigenvalues(g1);
  EXPECT_EQ(k1.eigenvalues[2], 0.0);
  EXPECT_NEAR(k1.eigenvalues[0], 8.0 * kPi * kPi, 1e-12);
  const GridSpec g2 = GridSpec::make(1, 2, 4, kDefaultNodeCap, 2);
  const KineticDiagonal k2 = kinetic_eigenvalues(g2);
  EXPECT_NEAR(k2.eigenvalues[g2.flat_index(std::vector<int>{0, 2})], 8.0 * kPi * kPi, 1e-12);
}

TEST(Kinetic, MaxAndSymmetry) {
  for (int dim = 1; dim <= 3; ++dim) {
    const GridSpec g = make_grid(1, dim, 8);
    const KineticDiagonal k = kinetic_eigenvalues(g);
    EXPECT_NEAR(k.max(), 0.5 * dim * (kPi * 8) * (kPi * 8), 1e-9);
    std::vector<int> idx(dim);
    for (std::size_t f = 0; f < g.point_count(); ++f) {
      EXPECT_GE(k.eigenvalues[f], 0.0);
      g.multi_index(f, idx);
      for (int& i : idx) i = g.n() - i;
      EXPECT_DOUBLE_EQ(k.eigenvalues[g.flat_index(idx)], k.eigenvalues[f]);
    }
  }
}

TEST(SelectTruncation, FloorCase) {
  const TruncationReport r = select_truncation(1.0, 2.0);
  EXPECT_NEAR(r.omega, 2.0 / kPi, 1e-15);
  EXPECT_EQ(r.n_selected, 6);
}

TEST(SelectTruncation, ClosedFormThenInequality) {
  const TruncationReport r = select_truncation(1.0, 1e-3);
  EXPECT_NEAR(r.omega, 1273.2395, 1e-3);
  const double ratio = std::log(r.omega) / std::log(std::log(r.omega));
  EXPECT_NEAR(ratio, 3.63, 0.01);
  EXPECT_EQ(r.n_closed_form, 8);
  // 4^4 = 256 is below 4 (1.0005) / (pi 1e-3) ~ 1274, so the check raises n.
  EXPECT_FALSE(truncation_inequality_holds(8, 1.0, 1e-3));
  EXPECT_EQ(r.n_selected, 10);
  EXPECT_TRUE(truncation_inequality_holds(10, 1.0, 1e-3));
}

TEST(SelectTruncation, InequalityAlwaysHoldsAndRelativeBound) {
  for (double g : {1e-3, 1.0, 37.0, 1e6, 1e12}) {
    for (double eps : {2.0, 0.5, 1e-2, 1e-6, 1e-10}) {
      const TruncationReport r = select_truncation(g, eps);
      EXPECT_EQ(r.n_selected % 2, 0);
      EXPECT_GE(r.n_selected, 6);
      EXPECT_TRUE(truncation_inequality_holds(r.n_selected, g, eps)) << g << " " << eps;
      if (r.n_selected > 6) EXPECT_FALSE(truncation_inequality_holds(r.n_selected - 2, g, eps));
      EXPECT_LE(r.bound_rel, 0.5 * eps * (1.0 + 1e-12));
    }
  }
}

TEST(SelectTruncation, InvalidTolerance) {
  EXPECT_EQ(code_of([] { select_truncation(1.0, 0.0); }), ErrorCode::kInvalidTolerance);
  EXPECT_EQ(code_of([] { select_truncation(1.0, 2.5); }), ErrorCode::kInvalidTolerance);
  EXPECT_EQ(code_of([] { select_truncation(0.0, 0.1); }), ErrorCode::kInvalidTolerance);
}

TEST(SpectralBound, Examples) {
  const SpectralBound b = spectral_error_bound(1.0, 6, 1);
  EXPECT_NEAR(b.abs_bound, 2.0 / kPi * std::sqrt(7.0) / 27.0, 1e-15);
  EXPECT_NEAR(b.abs_bound, 0.0624, 1e-4);
  EXPECT_NEAR(b.rel_bound, b.abs_bound / (std::sqrt(7.0) - b.abs_bound), 1e-15);
  const SpectralBound zero = spectral_error_bound(0.0, 8, 2);
  EXPECT_EQ(zero.abs_bound, 0.0);
  EXPECT_EQ(zero.rel_bound, 0.0);
  EXPECT_EQ(code_of([] { spectral_error_bound(1e9, 6, 1); }), ErrorCode::kBoundDiverges);
}

TEST(SpectralBound, NodalBoundTimesRootIsAbsolute) {
  EXPECT_NEAR(spectral_error_bound(3.0, 12, 2).abs_bound, nodal_error_bound(3.0, 12) * 13.0, 1e-15);
}

TEST(FourierDecay, Examples) {
  EXPECT_NEAR(fourier_decay_bound(2, 2.0 * kPi, 1), 1.0, 1e-15);
  for (int p = 2; p <= 6; ++p) {
    EXPECT_NEAR(fourier_decay_bound(p, 3.0, 2) * std::pow(2.0, p), fourier_decay_bound(p, 3.0, 1),
                1e-14);
  }
  EXPECT_NEAR(fourier_decay_bound(3, 5.0, 1, DecayConstant::kStated), 5.0, 1e-15);
}

TEST(FourierDecay, SineCoefficientBelowBound) {
  // Every derivative of sin has L1 norm 4 on [-pi, pi]; |f_hat(1)| = 1/2.
  for (int p = 2; p <= 10; ++p) {
    EXPECT_LE(0.5, fourier_decay_bound(p, 4.0, 1));
    EXPECT_LE(0.5, fourier_decay_bound(p, 4.0, 1, DecayConstant::kStated));
  }
}

}  // namespace
}  // namespace rsqs
