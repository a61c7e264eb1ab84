#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rsqs/lattice.hpp"

namespace rsqs {

struct ZeroPotential {};

struct ConstantPotential {
  double value = 0.0;
};

// 1/2 omega2 |x - center|^2
struct HarmonicPotential {
  double omega2 = 1.0;
  std::vector<double> center;
};

struct CallablePotential {
  std::function<double(std::span<const double> x, double t)> fn;
};

// sum_{i<j} q_i q_j / sqrt(|r_i - r_j|^2 + delta^2), particles of dimension d_space.
struct ModifiedCoulombPotential {
  std::vector<double> charges;
  int d_space = 3;
  double delta = 0.1;
};

// Electrons first, then nuclei, each 3 coordinates.
struct MolecularPotential {
  double Z = 1.0;
  double mass = 1.0;
  int eta_e = 1;
  int eta_n = 1;
  double delta = 0.1;
};

struct JelliumPotential {
  double e = 1.0;
  double delta = 0.1;
};

// Time-dependent scalar potential f(x, t) on [0,1]^D.
class Potential {
 public:
  using Kind = std::variant<ZeroPotential, ConstantPotential, HarmonicPotential, CallablePotential,
                            ModifiedCoulombPotential, MolecularPotential, JelliumPotential>;

  Potential() = default;
  explicit Potential(Kind kind, bool time_dependent = false,
                     std::optional<double> lipschitz_l = std::nullopt);

  static Potential zero();
  static Potential constant(double c);
  static Potential harmonic(double omega2, std::vector<double> center);
  static Potential callable(std::function<double(std::span<const double>, double)> fn,
                            bool time_dependent, std::optional<double> lipschitz_l = std::nullopt);
  static Potential modified_coulomb(std::vector<double> charges, int d_space, double delta);
  static Potential molecular(double Z, double mass, int eta_e, int eta_n, double delta);
  static Potential jellium(double e, double delta);

  const Kind& kind() const noexcept { return kind_; }
  bool time_dependent() const noexcept { return time_dependent_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }

  // Raw evaluation; see eval_potential for the finiteness-checked form.
  double operator()(std::span<const double> x, double t) const;

 private:
  Kind kind_ = ZeroPotential{};
  bool time_dependent_ = false;
  std::optional<double> lipschitz_;
};

// Throws NonFinite when f(x, t) is NaN or infinite.
double eval_potential(const Potential& v, std::span<const double> x, double t);

// f at every grid node, flat order. Throws PotentialEvalFailure on a
// non-finite sample.
std::vector<double> sample_on_nodes(const Potential& v, const GridSpec& grid, double t);
void sample_on_nodes(const Potential& v, const GridSpec& grid, double t, std::span<double> out);

// max over nodes of |f(chi_l, t)|.
double max_norm_on_nodes(const Potential& v, const GridSpec& grid, double t);

double modified_coulomb_direct(std::span<const double> x, std::span<const double> charges,
                               int d_space, double delta);

// eta (eta - 1) q^2 / (2 delta)
double coulomb_max_bound(int eta, double q_max, double delta);

// f_ee - f_ne + f_nn with unit electron charge and nuclear charge Z, each
// pair counted once.
double molecular_potential(std::span<const double> x, double Z, int eta_e, int eta_n,
                           double delta, int d_space = 3);

struct MassRescale {
  double time_scale = 1.0;       // t_bar = t * time_scale
  double potential_scale = 1.0;  // Hamiltonian multiplier in rescaled time
};

MassRescale molecular_mass_rescale(double mass);

// 1/2 sum_{i != j} e^2 / sqrt(r_ij^2 + delta^2); background terms are a
// global constant and are left out.
double jellium_potential(std::span<const double> x, double e, double delta, int d_space = 3);

}  // namespace rsqs
