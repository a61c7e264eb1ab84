#include "rsqs/dense_reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {
namespace {

void check_size(const GridSpec& grid) {
  if (grid.point_count() > kDenseStateCap) {
    fail(ErrorCode::kTooLargeForDense,
         "dense reference limited to " + std::to_string(kDenseStateCap) + " states, got " +
             std::to_string(grid.point_count()));
  }
}

// -1/2 d^2/dx^2 on one axis in the position basis.
Eigen::MatrixXcd kinetic_1d(int n) {
  const Eigen::MatrixXcd f = dense_shifted_dft_1d(n);
  Eigen::VectorXd lambda(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double w = 2.0 * std::numbers::pi * (k - n / 2);
    lambda[k] = 0.5 * w * w;
  }
  return f * lambda.asDiagonal() * f.adjoint();
}

Eigen::VectorXcd to_vector(const WaveFunction& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v[static_cast<Eigen::Index>(i)] = psi[i];
  return v;
}

Eigen::VectorXcd expm_apply(const Eigen::MatrixXcd& h, double t, const Eigen::VectorXcd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNonFinite, "dense eigensolver failed");
  Eigen::VectorXcd y = es.eigenvectors().adjoint() * x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] *= std::polar(1.0, -t * es.eigenvalues()[i]);
  return es.eigenvectors() * y;
}

}  // namespace

Eigen::MatrixXcd dense_shifted_dft_1d(int n) {
  const int m = n + 1;
  Eigen::MatrixXcd f(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int l = 0; l < m; ++l) {
    for (int k = 0; k < m; ++k) {
      // Reduce the integer product mod m before scaling to keep the angle exact.
      const long num = static_cast<long>(2 * k - n) * l;
      const long twice_m = 2L * m;
      const long red = ((num % twice_m) + twice_m) % twice_m;
      f(l, k) = std::polar(scale, std::numbers::pi * static_cast<double>(red) / m);
    }
  }
  return f;
}

Eigen::MatrixXcd dense_hamiltonian(const GridSpec& grid, const Potential& v, double t) {
  check_size(grid);
  const auto size = static_cast<Eigen::Index>(grid.point_count());
  const int dim = grid.dim();
  const int m = grid.axis_points();
  const Eigen::MatrixXcd k1 = kinetic_1d(grid.n());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
  std::vector<int> a(static_cast<std::size_t>(dim));
  std::vector<int> b(static_cast<std::size_t>(dim));
  // The kinetic operator is a sum over axes; entries couple nodes differing in one axis.
  for (Eigen::Index row = 0; row < size; ++row) {
    grid.multi_index(static_cast<std::size_t>(row), a);
    for (int axis = 0; axis < dim; ++axis) {
      b = a;
      for (int j = 0; j < m; ++j) {
        b[axis] = j;
        const auto col = static_cast<Eigen::Index>(grid.flat_index(b));
        h(row, col) += k1(a[axis], j);
      }
    }
  }
  const auto f = sample_on_nodes(v, grid, t);
  for (Eigen::Index i = 0; i < size; ++i) h(i, i) += f[static_cast<std::size_t>(i)];
  return h;
}

WaveFunction dense_reference_evolve(const WaveFunction& psi0, const Potential& v, double T,
                                    const DenseOptions& options) {
  check_size(psi0.grid());
  if (psi0.representation() != Representation::kPosition) {
    fail(ErrorCode::kRepresentationMismatch, "dense_reference_evolve: expected Position representation");
  }
  Eigen::VectorXcd x = to_vector(psi0);
  if (T != 0.0) {
    if (!v.time_dependent()) {
      x = expm_apply(dense_hamiltonian(psi0.grid(), v, 0.0), T, x);
    } else {
      int steps = options.substeps;
      if (steps <= 0) {
        // Potential-driven time variation sets the sub-step count; the
        // fourth-order Magnus error then sits far below test tolerances.
        // The scale is the largest node norm over a coarse time sample.
        double f0 = 0.0;
        for (int j = 0; j <= 16; ++j) f0 = std::max(f0, max_norm_on_nodes(v, psi0.grid(), T * j / 16.0));
        steps = static_cast<int>(std::clamp(std::ceil(64.0 * (1.0 + std::abs(T) * f0)), 64.0, 4096.0));
      }
      const double tau = T / steps;
      const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
      const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
      const Complex commutator_weight{0.0, std::sqrt(3.0) * tau * tau / 12.0};
      for (int s = 0; s < steps; ++s) {
        const double t0 = s * tau;
        const Eigen::MatrixXcd h1 = dense_hamiltonian(psi0.grid(), v, t0 + c1 * tau);
        const Eigen::MatrixXcd h2 = dense_hamiltonian(psi0.grid(), v, t0 + c2 * tau);
        Eigen::MatrixXcd m = 0.5 * (h1 + h2);
        // exp(-i tau M) with tau M = tau/2 (H1 + H2) + i sqrt(3) tau^2 / 12 [H1, H2].
        Eigen::MatrixXcd comm = h1 * h2 - h2 * h1;
        m += (commutator_weight / tau) * comm;
        m = 0.5 * (m + m.adjoint()).eval();
        x = expm_apply(m, tau, x);
      }
    }
  }
  std::vector<Complex> out(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = x[i];
  return WaveFunction(psi0.grid(), std::move(out), Representation::kPosition);
}

}  // namespace rsqs
