#include "rsqs/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {
namespace {

double pair_kernel(std::span<const double> x, int i, int j, int d, double delta2) {
  double r2 = delta2;
  for (int k = 0; k < d; ++k) {
    const double diff = x[i * d + k] - x[j * d + k];
    r2 += diff * diff;
  }
  return 1.0 / std::sqrt(r2);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Potential::Potential(Kind kind, bool time_dependent, std::optional<double> lipschitz_l)
    : kind_(std::move(kind)), time_dependent_(time_dependent), lipschitz_(lipschitz_l) {
  if (const auto* c = std::get_if<ModifiedCoulombPotential>(&kind_)) {
    if (!(c->delta > 0.0)) fail(ErrorCode::kInvalidArgument, "Coulomb delta must be positive");
    if (c->d_space < 1) fail(ErrorCode::kInvalidArgument, "d_space must be >= 1");
  }
  if (const auto* m = std::get_if<MolecularPotential>(&kind_)) {
    if (!(m->delta > 0.0)) fail(ErrorCode::kInvalidArgument, "Coulomb delta must be positive");
    if (m->eta_e < 0 || m->eta_n < 0) fail(ErrorCode::kInvalidArgument, "negative particle count");
  }
  if (const auto* j = std::get_if<JelliumPotential>(&kind_)) {
    if (!(j->delta > 0.0)) fail(ErrorCode::kInvalidArgument, "Coulomb delta must be positive");
  }
  if (const auto* c = std::get_if<CallablePotential>(&kind_)) {
    if (!c->fn) fail(ErrorCode::kInvalidArgument, "empty callable potential");
  }
}

Potential Potential::zero() { return Potential(ZeroPotential{}); }
Potential Potential::constant(double c) { return Potential(ConstantPotential{c}); }
Potential Potential::harmonic(double omega2, std::vector<double> center) {
  return Potential(HarmonicPotential{omega2, std::move(center)});
}
Potential Potential::callable(std::function<double(std::span<const double>, double)> fn,
                              bool time_dependent, std::optional<double> lipschitz_l) {
  return Potential(CallablePotential{std::move(fn)}, time_dependent, lipschitz_l);
}
Potential Potential::modified_coulomb(std::vector<double> charges, int d_space, double delta) {
  return Potential(ModifiedCoulombPotential{std::move(charges), d_space, delta});
}
Potential Potential::molecular(double Z, double mass, int eta_e, int eta_n, double delta) {
  return Potential(MolecularPotential{Z, mass, eta_e, eta_n, delta});
}
Potential Potential::jellium(double e, double delta) { return Potential(JelliumPotential{e, delta}); }

double Potential::operator()(std::span<const double> x, double t) const {
  return std::visit(
      Overloaded{
          [](const ZeroPotential&) { return 0.0; },
          [](const ConstantPotential& c) { return c.value; },
          [&](const HarmonicPotential& h) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double c = i < h.center.size() ? h.center[i] : 0.0;
              r2 += (x[i] - c) * (x[i] - c);
            }
            return 0.5 * h.omega2 * r2;
          },
          [&](const CallablePotential& c) { return c.fn(x, t); },
          [&](const ModifiedCoulombPotential& c) {
            return modified_coulomb_direct(x, c.charges, c.d_space, c.delta);
          },
          [&](const MolecularPotential& m) {
            return molecular_potential(x, m.Z, m.eta_e, m.eta_n, m.delta);
          },
          [&](const JelliumPotential& j) { return jellium_potential(x, j.e, j.delta); },
      },
      kind_);
}

double eval_potential(const Potential& v, std::span<const double> x, double t) {
  const double value = v(x, t);
  if (!std::isfinite(value)) fail(ErrorCode::kNonFinite, "potential returned a non-finite value");
  return value;
}

void sample_on_nodes(const Potential& v, const GridSpec& grid, double t, std::span<double> out) {
  if (out.size() != grid.point_count()) fail(ErrorCode::kInvalidArgument, "sample buffer size");
  if (const auto* c = std::get_if<ConstantPotential>(&v.kind())) {
    std::fill(out.begin(), out.end(), c->value);
    return;
  }
  if (std::holds_alternative<ZeroPotential>(v.kind())) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
    const double value = v(x, t);
    if (!std::isfinite(value)) {
      fail(ErrorCode::kPotentialEvalFailure, "non-finite potential at node " + std::to_string(flat));
    }
    out[flat] = value;
  });
}

std::vector<double> sample_on_nodes(const Potential& v, const GridSpec& grid, double t) {
  std::vector<double> out(grid.point_count());
  sample_on_nodes(v, grid, t, out);
  return out;
}

double max_norm_on_nodes(const Potential& v, const GridSpec& grid, double t) {
  double m = 0.0;
  for (double value : sample_on_nodes(v, grid, t)) m = std::max(m, std::abs(value));
  return m;
}

double modified_coulomb_direct(std::span<const double> x, std::span<const double> charges,
                               int d_space, double delta) {
  const int eta = static_cast<int>(charges.size());
  if (x.size() != charges.size() * static_cast<std::size_t>(d_space)) {
    fail(ErrorCode::kInvalidArgument, "coordinate count must equal eta * d_space");
  }
  const double delta2 = delta * delta;
  double sum = 0.0;
  for (int i = 0; i < eta; ++i) {
    for (int j = i + 1; j < eta; ++j) {
      sum += charges[i] * charges[j] * pair_kernel(x, i, j, d_space, delta2);
    }
  }
  return sum;
}

double coulomb_max_bound(int eta, double q_max, double delta) {
  if (eta < 1 || !(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "need eta >= 1, delta > 0");
  return eta * (eta - 1.0) * q_max * q_max / (2.0 * delta);
}

double molecular_potential(std::span<const double> x, double Z, int eta_e, int eta_n,
                           double delta, int d_space) {
  if (d_space != 3) fail(ErrorCode::kDimensionNot3, "molecular potential needs d_space = 3");
  const int eta = eta_e + eta_n;
  if (x.size() != static_cast<std::size_t>(3 * eta)) {
    fail(ErrorCode::kDimensionNot3, "expected 3 coordinates per particle");
  }
  const double delta2 = delta * delta;
  double f_ee = 0.0;
  double f_ne = 0.0;
  double f_nn = 0.0;
  for (int i = 0; i < eta; ++i) {
    for (int j = i + 1; j < eta; ++j) {
      const double k = pair_kernel(x, i, j, 3, delta2);
      const bool i_electron = i < eta_e;
      const bool j_electron = j < eta_e;
      if (i_electron && j_electron) {
        f_ee += k;
      } else if (!i_electron && !j_electron) {
        f_nn += Z * Z * k;
      } else {
        f_ne += Z * k;
      }
    }
  }
  return f_ee - f_ne + f_nn;
}

MassRescale molecular_mass_rescale(double mass) {
  if (!(mass > 0.0)) fail(ErrorCode::kInvalidArgument, "mass must be positive");
  return MassRescale{1.0 / mass, mass};
}

double jellium_potential(std::span<const double> x, double e, double delta, int d_space) {
  if (d_space != 3 || x.size() % 3 != 0) {
    fail(ErrorCode::kDimensionNot3, "jellium potential needs d_space = 3");
  }
  const int eta = static_cast<int>(x.size() / 3);
  const double delta2 = delta * delta;
  double sum = 0.0;
  for (int i = 0; i < eta; ++i) {
    for (int j = 0; j < eta; ++j) {
      if (i != j) sum += e * e * pair_kernel(x, i, j, 3, delta2);
    }
  }
  return 0.5 * sum;
}

}  // namespace rsqs
