#include <cmath>
#include <string>

#include "rsqs/error.hpp"
#include "rsqs/optimizer.hpp"

namespace rsqs {
namespace {

void set_sum_of_terms(ObjectiveSpec& o) {
  auto terms = o.axis_terms;
  o.f = [terms](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) s += terms[i](x[i]);
    return s;
  };
}

}  // namespace

// Constants below bound the derivatives on the ball of radius 2.
ObjectiveSpec double_well() {
  ObjectiveSpec o;
  o.name = "double_well";
  o.dim = 2;
  o.axis_terms = {[](double x) { return x * x; },
                  [](double x) { return (x * x - 1.0) * (x * x - 1.0); }};
  set_sum_of_terms(o);
  o.ell = 44.0;  // max |12 x^2 - 4|
  o.rho = 48.0;  // max |24 x|
  o.gap = 1.0;
  o.domain_radius = 2.0;
  o.x0 = {0.0, 1e-6};
  return o;
}

ObjectiveSpec quadratic_saddle(int d, double lambda) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "quadratic_saddle needs d >= 2");
  if (!(lambda > 0.0)) fail(ErrorCode::kNonPositiveArg, "quadratic_saddle needs lambda > 0");
  ObjectiveSpec o;
  o.name = "quadratic_saddle";
  o.dim = d;
  for (int i = 0; i < d; ++i) {
    const double c = i + 1 < d ? 0.5 * lambda : -0.5 * lambda;
    o.axis_terms.push_back([c](double x) { return c * x * x; });
  }
  set_sum_of_terms(o);
  o.ell = lambda;
  o.rho = 1.0;  // nominal; the Hessian is constant
  o.gap = 1.0;
  o.domain_radius = 2.0;
  o.x0.assign(static_cast<std::size_t>(d), 0.0);
  o.x0.back() = 1e-6;
  return o;
}

ObjectiveSpec convex_quadratic(int d) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "convex_quadratic needs d >= 1");
  ObjectiveSpec o;
  o.name = "convex_quadratic";
  o.dim = d;
  o.axis_terms.assign(static_cast<std::size_t>(d), [](double x) { return 0.5 * x * x; });
  set_sum_of_terms(o);
  o.ell = 1.0;
  o.rho = 1.0;
  o.gap = 0.5 * d;
  o.domain_radius = 2.0 * std::sqrt(static_cast<double>(d));
  o.x0.assign(static_cast<std::size_t>(d), 1.0);
  return o;
}

ObjectiveSpec rosenbrock_like() {
  ObjectiveSpec o;
  o.name = "rosenbrock_like";
  o.dim = 2;
  o.f = [](std::span<const double> x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 10.0 * b * b;
  };
  o.ell = 570.0;
  o.rho = 500.0;
  o.gap = 4.0;
  o.domain_radius = 2.0;
  o.x0 = {-1.0, 1.0};
  return o;
}

ObjectiveSpec separable_double_well(int d) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "separable_double_well needs d >= 1");
  ObjectiveSpec o;
  o.name = "separable_double_well";
  o.dim = d;
  o.axis_terms.push_back([](double x) { return (x * x - 1.0) * (x * x - 1.0); });
  for (int i = 1; i < d; ++i) o.axis_terms.push_back([](double x) { return x * x; });
  set_sum_of_terms(o);
  o.ell = 44.0;
  o.rho = 48.0;
  o.gap = 1.0;
  o.domain_radius = 2.0;
  o.x0.assign(static_cast<std::size_t>(d), 0.0);
  o.x0[0] = 1e-6;
  return o;
}

ObjectiveSpec objective_by_name(const std::string& name, int dim) {
  if (name == "double_well") return double_well();
  if (name == "quadratic_saddle") return quadratic_saddle(dim < 2 ? 2 : dim, 1.0);
  if (name == "convex_quadratic") return convex_quadratic(dim < 1 ? 2 : dim);
  if (name == "rosenbrock_like") return rosenbrock_like();
  if (name == "separable_double_well") return separable_double_well(dim < 1 ? 2 : dim);
  fail(ErrorCode::kInvalidArgument, "unknown objective '" + name + "'");
}

}  // namespace rsqs
