#include "rsqs/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "rsqs/error.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/propagate.hpp"

namespace rsqs {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Signed offset to the nearest periodic image on the unit circle.
double wrap(double d) { return d - std::round(d); }

// 1 inside [w, 1 - w], cosine taper to 0 at the box faces.
double taper(double z, double w) {
  if (w <= 0.0) return 1.0;
  if (z < w) return 0.5 * (1.0 - std::cos(std::numbers::pi * z / w));
  if (z > 1.0 - w) return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - z) / w));
  return 1.0;
}

}  // namespace

void ObjectiveSpec::validate() const {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "objective: dim must be >= 1");
  if (!f) fail(ErrorCode::kInvalidArgument, "objective: missing evaluation function");
  if (!(ell > 0.0) || !(rho > 0.0)) fail(ErrorCode::kNonPositiveArg, "objective: ell and rho must be > 0");
  if (!(domain_radius > 0.0)) fail(ErrorCode::kNonPositiveArg, "objective: domain radius must be > 0");
  if (x0.size() != static_cast<std::size_t>(dim)) {
    fail(ErrorCode::kInvalidArgument, "objective: x0 must have dim entries");
  }
  if (!axis_terms.empty() && axis_terms.size() != static_cast<std::size_t>(dim)) {
    fail(ErrorCode::kInvalidArgument, "objective: axis_terms must have dim entries");
  }
}

WaveFunction gaussian_packet(const GridSpec& grid, std::span<const double> center, double r0) {
  if (center.size() != static_cast<std::size_t>(grid.dim())) {
    fail(ErrorCode::kInvalidArgument, "gaussian_packet: center dimension mismatch");
  }
  if (!(r0 > 0.0)) fail(ErrorCode::kNonPositiveArg, "gaussian_packet: r0 must be > 0");
  if (r0 < 3.0 * grid.spacing()) {
    fail(ErrorCode::kPacketUnresolved, "gaussian_packet: r0 = " + std::to_string(r0) +
                                           " is below 3 grid spacings");
  }
  WaveFunction psi(grid, Representation::kPosition);
  const double inv = 1.0 / (4.0 * r0 * r0);
  for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double d = wrap(x[a] - center[a]);
      s += d * d;
    }
    psi[flat] = Complex{std::exp(-s * inv), 0.0};
  });
  return normalize_discrete(psi);
}

PositionMoments position_moments(const WaveFunction& psi, std::span<const double> origin) {
  const GridSpec& grid = psi.grid();
  const auto dim = static_cast<std::size_t>(grid.dim());
  if (origin.size() != dim) fail(ErrorCode::kInvalidArgument, "position_moments: origin mismatch");
  const double total = psi.norm_squared();
  if (!(total > 0.0)) fail(ErrorCode::kZeroState, "position_moments: zero state");
  std::vector<double> m1(dim, 0.0);
  std::vector<double> m2(dim, 0.0);
  for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
    const double p = std::norm(psi[flat]) / total;
    for (std::size_t a = 0; a < dim; ++a) {
      const double y = wrap(x[a] - origin[a]);
      m1[a] += p * y;
      m2[a] += p * y * y;
    }
  });
  PositionMoments out{std::vector<double>(dim), std::vector<double>(dim)};
  for (std::size_t a = 0; a < dim; ++a) {
    out.mean[a] = origin[a] + m1[a];
    out.variance[a] = m2[a] - m1[a] * m1[a];
  }
  return out;
}

double escape_time(double ell, double rho, double eps, int d, double gap) {
  if (!(ell > 0.0) || !(rho > 0.0) || !(eps > 0.0) || d < 1 || !(gap > 0.0)) {
    fail(ErrorCode::kNonPositiveArg, "escape_time: all arguments must be positive");
  }
  const double inner = (ell * gap / (eps * eps * std::sqrt(rho))) *
                       (d + 2.0 * std::log(3.0 * gap / std::pow(eps, 1.5)));
  if (!(inner > 0.0)) fail(ErrorCode::kNonPositiveArg, "escape_time: logarithm argument not positive");
  return 8.0 / std::pow(rho * eps, 0.25) * std::log(inner);
}

double perturbation_radius(double rho, double eps, PerturbationScale scale) {
  if (!(rho > 0.0) || !(eps > 0.0)) fail(ErrorCode::kNonPositiveArg, "perturbation radius needs rho, eps > 0");
  return scale == PerturbationScale::kDimensional ? (2.0 / 3.0) * std::sqrt(eps / rho)
                                                  : (2.0 / 3.0) * std::sqrt(rho / eps);
}

double PacketSimulation::to_x(int axis, double z) const {
  return x_t.at(static_cast<std::size_t>(axis)) + r0 * (2.0 * half_width * z - half_width);
}

PacketSimulation simulate_packet(const ObjectiveSpec& obj, std::span<const double> x_t, double r0,
                                 double t_prime, const SimulationSpec& sim, bool use_separable) {
  obj.validate();
  const int d = obj.dim;
  if (x_t.size() != static_cast<std::size_t>(d)) {
    fail(ErrorCode::kInvalidArgument, "simulate_packet: x_t dimension mismatch");
  }
  if (!(r0 > 0.0)) fail(ErrorCode::kNonPositiveArg, "simulate_packet: r0 must be > 0");
  if (!(t_prime >= 0.0)) fail(ErrorCode::kNonPositiveArg, "simulate_packet: T' must be >= 0");
  if (!(sim.dt > 0.0)) fail(ErrorCode::kNonPositiveArg, "simulate_packet: dt must be > 0");
  if (use_separable && !obj.separable()) {
    fail(ErrorCode::kInvalidArgument, "simulate_packet: objective is not separable");
  }
  if (!use_separable && d > 3) {
    fail(ErrorCode::kInvalidArgument, "simulate_packet: full-grid simulation limited to d <= 3");
  }

  PacketSimulation out;
  out.separable = use_separable;
  out.half_width = obj.domain_radius / r0;
  out.r0 = r0;
  out.t_prime = t_prime;
  out.x_t.assign(x_t.begin(), x_t.end());
  const double width = 2.0 * out.half_width;
  const double scale = width * width;  // unit-grid Hamiltonian factor
  const double s_total = t_prime / scale;
  out.steps = t_prime > 0.0 ? static_cast<std::int64_t>(std::ceil(t_prime / sim.dt - 1e-9)) : 0;
  const double tau = out.steps > 0 ? s_total / static_cast<double>(out.steps) : 0.0;
  const double taper_w = sim.mollifier_fraction;

  const std::vector<double> grad = finite_diff_gradient(obj.f, x_t);
  const double f_t = obj.f(x_t);
  const double inv_r0sq = 1.0 / (r0 * r0);
  std::vector<double> xt(x_t.begin(), x_t.end());

  // Gradient-shifted objective in the y frame, one axis at a time.
  auto axis_shifted = [&](int i, double z) {
    const double x = out.to_x(i, z);
    const double xi = xt[i];
    return (obj.axis_terms[i](x) - obj.axis_terms[i](xi) - grad[i] * (x - xi)) * inv_r0sq;
  };

  auto run = [&](const GridSpec& grid, Potential v) {
    std::vector<double> center(static_cast<std::size_t>(grid.dim()), 0.5);
    WaveFunction psi = gaussian_packet(grid, center, 1.0 / width);
    SplitOperator op(grid, std::move(v), SuzukiOrder::make(sim.k));
    for (std::int64_t s = 0; s < out.steps; ++s) {
      op.step(psi.amplitudes(), static_cast<double>(s) * tau, tau);
    }
    if (!std::isfinite(psi.norm())) fail(ErrorCode::kNonFinite, "simulate_packet: non-finite state");
    return psi;
  };

  if (use_separable) {
    const GridSpec grid = make_grid(1, 1, sim.n);
    for (int i = 0; i < d; ++i) {
      Potential v = Potential::callable(
          [&, i](std::span<const double> z, double) {
            return scale * taper(z[0], taper_w) * axis_shifted(i, z[0]);
          },
          false);
      out.factors.push_back(run(grid, std::move(v)));
    }
    return out;
  }

  const GridSpec grid = make_grid(1, d, sim.n);
  Potential v = Potential::callable(
      [&](std::span<const double> z, double) {
        if (obj.separable()) {
          double s = 0.0;
          for (int i = 0; i < d; ++i) s += taper(z[i], taper_w) * axis_shifted(i, z[i]);
          return scale * s;
        }
        std::vector<double> x(static_cast<std::size_t>(d));
        double w = 1.0;
        double lin = 0.0;
        for (int i = 0; i < d; ++i) {
          x[i] = out.to_x(i, z[i]);
          w *= taper(z[i], taper_w);
          lin += grad[i] * (x[i] - xt[i]);
        }
        return scale * w * (obj.f(x) - f_t - lin) * inv_r0sq;
      },
      false);
  out.factors.push_back(run(grid, std::move(v)));
  return out;
}

namespace {

// Index drawn from the discrete distribution |psi|^2 by inverse CDF.
std::size_t draw_node(const WaveFunction& psi, CounterRng& rng) {
  std::vector<double> cdf(psi.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    acc += std::norm(psi[i]);
    cdf[i] = acc;
  }
  if (!(acc > 0.0) || !std::isfinite(acc)) {
    fail(ErrorCode::kSamplingDegenerate, "sampling: |Phi|^2 has no finite positive mass");
  }
  const double u = rng.uniform() * acc;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), psi.size() - 1);
}

}  // namespace

std::vector<double> sample_position(const PacketSimulation& sim, CounterRng& rng) {
  const int d = static_cast<int>(sim.x_t.size());
  std::vector<double> x(static_cast<std::size_t>(d));
  if (sim.separable) {
    for (int i = 0; i < d; ++i) {
      const WaveFunction& psi = sim.factors.at(static_cast<std::size_t>(i));
      const std::size_t l = draw_node(psi, rng);
      x[i] = sim.to_x(i, static_cast<double>(l) * psi.grid().spacing());
    }
    return x;
  }
  const WaveFunction& psi = sim.factors.at(0);
  const std::size_t flat = draw_node(psi, rng);
  std::vector<int> idx(static_cast<std::size_t>(d));
  psi.grid().multi_index(flat, idx);
  for (int i = 0; i < d; ++i) x[i] = sim.to_x(i, idx[i] * psi.grid().spacing());
  return x;
}

std::vector<double> quantum_sim_sample(const ObjectiveSpec& obj, std::span<const double> x_t,
                                       double r0, double t_prime, const SimulationSpec& sim,
                                       CounterRng& rng) {
  const PacketSimulation packet = simulate_packet(obj, x_t, r0, t_prime, sim, obj.separable());
  std::vector<double> xi = sample_position(packet, rng);
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] -= x_t[i];
  return xi;
}

std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> x, std::optional<double> h) {
  const double step =
      h.value_or(std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, norm2(x)));
  if (!(step > 0.0)) fail(ErrorCode::kNonPositiveArg, "finite_diff_gradient: h must be > 0");
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    const double fp = f(xp);
    xp[i] = x[i] - step;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

std::vector<double> finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, std::optional<double> h) {
  const double step =
      h.value_or(std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, norm2(x)));
  if (!(step > 0.0)) fail(ErrorCode::kNonPositiveArg, "finite_diff_hessian: h must be > 0");
  const std::size_t d = x.size();
  std::vector<double> hess(d * d, 0.0);
  std::vector<double> xp(x.begin(), x.end());
  const double f0 = f(x);
  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    xp[i] += di;
    xp[j] += dj;
    const double v = f(xp);
    xp[i] = x[i];
    xp[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < d; ++i) {
    hess[i * d + i] = (eval(i, step, i, 0.0) - 2.0 * f0 + eval(i, -step, i, 0.0)) / (step * step);
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = (eval(i, step, j, step) - eval(i, step, j, -step) - eval(i, -step, j, step) +
                        eval(i, -step, j, -step)) /
                       (4.0 * step * step);
      hess[i * d + j] = v;
      hess[j * d + i] = v;
    }
  }
  return hess;
}

double min_eigenvalue(std::span<const double> symmetric, int d) {
  if (d < 1 || symmetric.size() != static_cast<std::size_t>(d) * d) {
    fail(ErrorCode::kInvalidArgument, "min_eigenvalue: expected a d x d matrix");
  }
  Eigen::Map<const Eigen::MatrixXd> m(symmetric.data(), d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PgdResult pgd_qs(const ObjectiveSpec& obj, const EscapeConfig& cfg) {
  obj.validate();
  if (!(cfg.eps > 0.0)) fail(ErrorCode::kNonPositiveArg, "pgd_qs: eps must be > 0");
  if (!(cfg.c_r > 0.0)) fail(ErrorCode::kNonPositiveArg, "pgd_qs: C_r must be > 0");
  if (cfg.max_iters < 1) fail(ErrorCode::kInvalidArgument, "pgd_qs: max_iters must be >= 1");
  const double r0 = cfg.r0.value_or(cfg.c_r * obj.domain_radius);
  const double t_prime =
      cfg.t_prime.value_or(escape_time(obj.ell, obj.rho, cfg.eps, obj.dim, obj.gap));
  const double eta = cfg.eta_step.value_or(1.0 / obj.ell);
  if (!(r0 > 0.0) || !(t_prime > 0.0) || !(eta > 0.0)) {
    fail(ErrorCode::kNonPositiveArg, "pgd_qs: r0, T' and step size must be > 0");
  }
  const double radius = perturbation_radius(obj.rho, cfg.eps, cfg.perturbation);
  const double curvature_floor = -std::sqrt(obj.rho * cfg.eps);

  PgdResult res;
  res.t_prime = t_prime;
  res.r0 = r0;
  CounterRng rng(cfg.seed);
  std::vector<double> x = obj.x0;
  std::vector<double> best = x;
  double best_grad = std::numeric_limits<double>::infinity();
  std::int64_t calls = 0;

  for (std::int64_t it = 0; it < cfg.max_iters; ++it) {
    std::vector<double> g = finite_diff_gradient(obj.f, x);
    double gn = norm2(g);
    if (!std::isfinite(gn)) fail(ErrorCode::kNonFinite, "pgd_qs: gradient is not finite");
    if (gn < best_grad) {
      best_grad = gn;
      best = x;
    }
    if (gn <= cfg.eps) {
      const double lmin = min_eigenvalue(finite_diff_hessian(obj.f, x), obj.dim);
      if (lmin >= curvature_floor) {
        res.x = x;
        res.certified = true;
        res.iterations = it;
        res.grad_norm = gn;
        res.lambda_min = lmin;
        res.f = obj.f(x);
        if (cfg.record_trace) res.trace.push_back({it, gn, res.f, calls, t_prime});
        return res;
      }
      std::vector<double> xi = quantum_sim_sample(obj, x, r0, t_prime, cfg.simulation, rng);
      double xn = norm2(xi);
      // A sample exactly at x_t carries no direction; redraw a bounded number of times.
      for (int tries = 0; xn == 0.0 && tries < 16; ++tries) {
        xi = quantum_sim_sample(obj, x, r0, t_prime, cfg.simulation, rng);
        xn = norm2(xi);
      }
      if (xn == 0.0) fail(ErrorCode::kSamplingDegenerate, "pgd_qs: sampled xi is zero");
      SimulationCall call;
      call.iter = it;
      call.t_prime = t_prime;
      call.delta.resize(xi.size());
      std::vector<double> xp = x;
      std::vector<double> xm = x;
      for (std::size_t i = 0; i < xi.size(); ++i) {
        call.delta[i] = radius * xi[i] / xn;
        xp[i] += call.delta[i];
        xm[i] -= call.delta[i];
      }
      call.xi = std::move(xi);
      call.f_plus = obj.f(xp);
      call.f_minus = obj.f(xm);
      call.sign = call.f_plus <= call.f_minus ? 1 : -1;
      x = call.sign > 0 ? xp : xm;
      ++calls;
      res.calls.push_back(std::move(call));
      g = finite_diff_gradient(obj.f, x);
      gn = norm2(g);
    }
    if (cfg.record_trace) res.trace.push_back({it, gn, obj.f(x), calls, t_prime});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * g[i];
  }
  res.max_iters_exceeded = true;
  res.iterations = cfg.max_iters;
  res.x = best;
  res.grad_norm = best_grad;
  res.lambda_min = min_eigenvalue(finite_diff_hessian(obj.f, best), obj.dim);
  res.f = obj.f(best);
  return res;
}

}  // namespace rsqs
