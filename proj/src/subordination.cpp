#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

double first_moment(const Measure& mu) { return moments(mu, 1)[1].get_d(); }

void require_positive_class(const Measure& mu, const char* name) {
  if (!mu.in_positive_class()) {
    throw DomainError(std::string(name) + " must be supported on [0, inf) with mu({0}) < 1");
  }
}

struct Residuals {
  double product;
  double krein;
};

Residuals residuals(const Measure& mu1, const Measure& mu2, Complex z, Complex z1, Complex z2, Complex* k_value) {
  const Complex k1 = z1 * krein_k_over_z(mu1, z1);
  const Complex k2 = z2 * krein_k_over_z(mu2, z2);
  if (k_value != nullptr) *k_value = k1;
  return {std::abs(z1 * z2 - z * k1), std::abs(k1 - k2)};
}

}  // namespace

SubordinationSolution solve_subordination(const Measure& mu1, const Measure& mu2, Complex z, double tol,
                                          int max_iter) {
  require_positive_class(mu1, "mu1");
  require_positive_class(mu2, "mu2");
  if (!(tol > 0.0)) throw DomainError("subordination tolerance must be positive");
  if (!(z.imag() > 0.0 || (z.imag() == 0.0 && z.real() < 0.0))) {
    throw DomainError("subordination is solved for z in the upper half plane or on the negative axis");
  }

  SubordinationSolution sol;
  sol.z = z;
  sol.z1 = first_moment(mu2) * z;
  sol.z2 = first_moment(mu1) * z;

  double weight = 1.0;
  Complex prev_step1 = 0.0;
  Complex prev_step2 = 0.0;
  for (int it = 0; it <= max_iter; ++it) {
    const Residuals res = residuals(mu1, mu2, z, sol.z1, sol.z2, &sol.k_value);
    sol.residual_product = res.product;
    sol.residual_krein = res.krein;
    sol.iterations = it;

    const Complex next1 = z * krein_k_over_z(mu2, sol.z2);
    const Complex next2 = z * krein_k_over_z(mu1, sol.z1);
    const Complex step1 = next1 - sol.z1;
    const Complex step2 = next2 - sol.z2;
    const double scale = std::max(std::abs(sol.z1), std::abs(sol.z2));
    const bool settled = std::max(std::abs(step1), std::abs(step2)) <= 1e-13 * scale;
    // Residuals are measured against the size of the terms once those exceed 1.
    const double product_scale = std::max(1.0, std::abs(sol.z1 * sol.z2));
    const double krein_scale = std::max(1.0, std::abs(sol.k_value));
    if (res.product <= tol * product_scale && res.krein <= tol * krein_scale && settled) return sol;
    if (it == max_iter) break;

    // Oscillation: successive updates point in opposite directions.
    if (it > 0 && weight == 1.0 &&
        (std::real(step1 * std::conj(prev_step1)) < 0.0 || std::real(step2 * std::conj(prev_step2)) < 0.0)) {
      weight = 0.5;
      sol.damped = true;
    }
    sol.z1 += weight * step1;
    sol.z2 += weight * step2;
    prev_step1 = step1;
    prev_step2 = step2;
  }
  std::ostringstream msg;
  msg << "subordination did not converge at z = " << z << " after " << max_iter
      << " iterations (residuals " << sol.residual_product << ", " << sol.residual_krein << ")";
  throw ConvergenceError(msg.str());
}

std::vector<double> fit_krein_expansion(const std::vector<double>& x, const std::vector<double>& k_values,
                                        std::size_t degree) {
  if (x.size() != k_values.size()) throw DomainError("fit needs equally many abscissae and values");
  if (x.size() <= degree) throw DomainError("fit needs more samples than the polynomial degree");
  const double scale = *std::max_element(x.begin(), x.end());
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = x[static_cast<std::size_t>(i)] / scale;
    double pw = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j, pw *= u) design(i, j) = pw;
    rhs(i) = k_values[static_cast<std::size_t>(i)] / x[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
  // K(-x)/x = sum_j c_j (x/scale)^j and the j-th coefficient is (-1)^{j+1} r_{j+1}.
  std::vector<double> r(degree + 1);
  for (std::size_t j = 0; j <= degree; ++j) {
    const double coeff = c(static_cast<Eigen::Index>(j)) / std::pow(scale, static_cast<double>(j));
    r[j] = (j % 2 == 0) ? -coeff : coeff;
  }
  return r;
}

NumericMoments boxtimes_subordination_moments(const Measure& mu1, const Measure& mu2, std::size_t p, double tol,
                                              int max_iter) {
  require_positive_class(mu1, "mu1");
  require_positive_class(mu2, "mu2");
  if (p < 1) throw DomainError("boxtimes order p must be >= 1");
  if (first_moment(mu1) == 0.0 || first_moment(mu2) == 0.0) {
    throw DomainError("boxtimes needs nonzero first moments");
  }
  // mu1 boxtimes mu2 lives on [0, b1 b2]; on |z| <= 1/(2 b1 b2) psi is analytic
  // and 1 + psi stays away from 0, so sampling at half that radius converges geometrically.
  const double bound = mu1.support_bound() * mu2.support_bound();
  NumericMoments out;
  out.radius = 0.25 / bound;
  out.nodes = std::max<std::size_t>(128, 8 * p);
  const std::size_t half = out.nodes / 2;

  std::vector<double> r(p, 0.0);
  for (std::size_t j = 0; j < half; ++j) {
    // Nodes at half-integer angles: conjugate pairs, none on the real axis.
    const double theta = std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(out.nodes);
    const Complex z = std::polar(out.radius, theta);
    const SubordinationSolution sol = solve_subordination(mu1, mu2, z, tol, max_iter);
    out.max_residual = std::max({out.max_residual, sol.residual_product, sol.residual_krein});
    Complex zpow = 1.0;
    for (std::size_t k = 1; k <= p; ++k) {
      zpow *= z;
      // The lower-half node is the conjugate, so each pair contributes twice the real part.
      r[k - 1] += 2.0 * std::real(sol.k_value / zpow) / static_cast<double>(out.nodes);
    }
  }
  out.boolean_cumulants = r;
  out.moments.assign(p, 0.0);
  for (std::size_t k = 1; k <= p; ++k) {
    double acc = r[k - 1];
    for (std::size_t i = 1; i < k; ++i) acc += r[i - 1] * out.moments[k - i - 1];
    out.moments[k - 1] = acc;
  }
  return out;
}

}  // namespace freeconv
