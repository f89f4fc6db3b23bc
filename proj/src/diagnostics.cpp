#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"

namespace freeconv {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Integrates over u in (lo, hi) with x = u^{1/(1-a)}, which turns
// x^{-1-a} dx into x^{-1} dx / (1-a) and leaves a bounded integrand K(-x)/x.
template <class KOverZ>
double integrate_transformed(KOverZ&& k_over_z, double a, double lo, double hi, double* error) {
  const double exponent = 1.0 / (1.0 - a);
  auto integrand = [&](double u) {
    const double x = std::pow(u, exponent);
    return k_over_z(-x);  // K(-x)/(-x) = -K(-x)/x >= 0
  };
  double err = 0.0;
  const double value = Kronrod::integrate(integrand, lo, hi, 10, 1e-9, &err);
  if (error != nullptr) *error = err;
  return value;
}

void require_quadrature(double value, double error) {
  if (!std::isfinite(value) || error > kQuadratureTolerance * std::max(1.0, std::abs(value))) {
    throw ConvergenceError("quadrature failed to reach tolerance 1e-8 (error estimate " + std::to_string(error) + ")");
  }
}

}  // namespace

double fractional_moment(const Measure& mu, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("fractional moment order must be positive");
  if (!mu.on_positive_half_line()) throw DomainError("fractional moments need a measure on [0, inf)");
  if (const auto* a = mu.as_atomic()) {
    double acc = 0.0;
    for (const auto& atom : a->atoms()) acc += atom.weight.get_d() * std::pow(atom.location.get_d(), alpha);
    return acc;
  }
  if (const auto* g = mu.as_grid()) {
    return g->integrate([alpha](double u) { return u > 0.0 ? std::pow(u, alpha) : 0.0; });
  }
  throw DomainError("fractional moments are only computed for atomic or grid measures");
}

DiagnosticsReport fractional_diagnostics(const Measure& mu, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!mu.in_positive_class()) throw DomainError("diagnostics need a measure on [0, inf) with mu({0}) < 1");
  if (mu.as_semicircle() != nullptr) throw DomainError("diagnostics need an atomic or grid measure");

  DiagnosticsReport report;
  report.alpha = alpha;
  auto k_over_z = [&mu](double z) { return krein_k_over_z(mu, Complex(z, 0.0)).real(); };
  report.integral_value = integrate_transformed(k_over_z, alpha, 0.0, 1.0, &report.quadrature_error);
  require_quadrature(report.integral_value, report.quadrature_error);

  double inv_c = 0.0;
  double inner = 0.0;  // int over (0,1) of u^alpha
  if (const auto* a = mu.as_atomic()) {
    for (const auto& atom : a->atoms()) {
      const double u = atom.location.get_d();
      const double w = atom.weight.get_d();
      inv_c += w / (1.0 + u);
      if (sgn(atom.location) > 0 && atom.location < 1) inner += w * std::pow(u, alpha);
    }
  } else {
    const auto& g = *mu.as_grid();
    inv_c = g.integrate([](double u) { return 1.0 / (1.0 + u); });
    inner = g.integrate([alpha](double u) { return (u > 0.0 && u < 1.0) ? std::pow(u, alpha) : 0.0; });
  }
  report.c_mu = 1.0 / inv_c;
  report.m_alpha = fractional_moment(mu, alpha);
  report.lower_bound = 0.5 * (report.m_alpha - inner);
  report.upper_bound = report.c_mu * report.m_alpha / alpha;
  report.finite = std::isfinite(report.integral_value);
  return report;
}

ClosureReport boxtimes_fractional_closure_check(const Measure& mu1, const Measure& mu2, double alpha, double beta) {
  if (mu1.as_atomic() == nullptr || mu2.as_atomic() == nullptr) {
    throw DomainError("closure check is defined for atomic measures");
  }
  if (!mu1.in_positive_class() || !mu2.in_positive_class()) {
    throw DomainError("closure check needs measures on [0, inf) with mu({0}) < 1");
  }
  if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0)) throw DomainError("alpha, beta must lie in (0, 1]");
  const double gamma = alpha * beta;
  if (!(gamma < 1.0)) throw DomainError("the integral criterion needs alpha * beta < 1");

  ClosureReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.gamma = gamma;
  const double m1 = moments(mu1, 1)[1].get_d();
  const double m2 = moments(mu2, 1)[1].get_d();
  report.x0 = std::min(1.0, 1.0 / (4.0 * m1 * m2));

  // K_{mu1 boxtimes mu2}(z)/z at z = -x; z = 0 is the limit r_1 r_1 = m1 m2.
  auto k_over_z = [&](double z) {
    if (z == 0.0) return m1 * m2;
    const SubordinationSolution sol = solve_subordination(mu1, mu2, Complex(z, 0.0));
    report.max_residual = std::max({report.max_residual, sol.residual_product, sol.residual_krein});
    return (sol.k_value / sol.z).real();
  };
  auto upper = [gamma](double x) { return std::pow(x, 1.0 - gamma); };

  double err = 0.0;
  double eps = kClosureStartEpsilon;
  double partial = integrate_transformed(k_over_z, gamma, upper(eps), upper(report.x0), &err);
  require_quadrature(partial, err);
  report.rows.push_back({eps, partial});
  while (true) {
    const double next_eps = eps / 4.0;
    if (next_eps < 1e-300) break;
    const double piece = integrate_transformed(k_over_z, gamma, upper(next_eps), upper(eps), &err);
    require_quadrature(piece, err);
    eps = next_eps;
    const double next = partial + piece;
    report.rows.push_back({eps, next});
    const bool agree = std::abs(next - partial) < kClosureAgreement;
    partial = next;
    if (agree) {
      report.finite = true;
      break;
    }
  }

  if (report.finite) {
    const double head = integrate_transformed(k_over_z, gamma, 0.0, upper(report.x0), &err);
    require_quadrature(head, err);
    double tail = 0.0;
    if (report.x0 < 1.0) {
      tail = integrate_transformed(k_over_z, gamma, upper(report.x0), 1.0, &err);
      require_quadrature(tail, err);
    }
    report.integral_value = head + tail;
  }
  return report;
}

}  // namespace freeconv
