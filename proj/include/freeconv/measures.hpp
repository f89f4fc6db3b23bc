#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "freeconv/rational.hpp"
#include "freeconv/sequences.hpp"

namespace freeconv {

using Complex = std::complex<double>;

struct Atom {
  Rational location;
  Rational weight;
};

/// Finitely supported measure with exact rational atoms and weights.
class AtomicMeasure {
 public:
  /// Weights must be positive and sum to exactly 1. Equal locations are merged.
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

/// Density 2/(pi r^2) sqrt(r^2 - (x - m)^2) on [m - r, m + r].
struct SemicircleMeasure {
  SemicircleMeasure(double center, double radius);
  double center;
  double radius;
};

/// Density sampled on an ascending grid; rescaled at construction so its
/// composite-trapezoid integral is 1.
class DensityGridMeasure {
 public:
  DensityGridMeasure(std::vector<double> abscissae, std::vector<double> density);

  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& f() const noexcept { return f_; }

  /// Composite trapezoid integral of g(x) f(x).
  template <class Fn>
  auto integrate(Fn&& g) const {
    using R = decltype(g(0.0) * 1.0);
    R acc{};
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      const double h = x_[i + 1] - x_[i];
      acc += (g(x_[i]) * f_[i] + g(x_[i + 1]) * f_[i + 1]) * (0.5 * h);
    }
    return acc;
  }

 private:
  std::vector<double> x_;
  std::vector<double> f_;
};

class Measure {
 public:
  enum class Kind { kAtomic, kSemicircle, kDensityGrid };

  Measure(AtomicMeasure m) : impl_(std::move(m)) {}
  Measure(SemicircleMeasure m) : impl_(m) {}
  Measure(DensityGridMeasure m) : impl_(std::move(m)) {}

  static Measure point_mass(const Rational& c);
  static Measure bernoulli(const Rational& p);  // weight p at 1, 1-p at 0
  static Measure atomic(std::vector<Atom> atoms);

  Kind kind() const noexcept { return static_cast<Kind>(impl_.index()); }
  const AtomicMeasure* as_atomic() const noexcept { return std::get_if<AtomicMeasure>(&impl_); }
  const SemicircleMeasure* as_semicircle() const noexcept { return std::get_if<SemicircleMeasure>(&impl_); }
  const DensityGridMeasure* as_grid() const noexcept { return std::get_if<DensityGridMeasure>(&impl_); }

  /// Support contained in [0, inf).
  bool on_positive_half_line() const;
  /// mu({0}); zero for absolutely continuous measures.
  double mass_at_zero() const;
  /// sup |x| over the support.
  double support_bound() const;
  /// Member of the class used for multiplicative convolution: on [0, inf) with mu({0}) < 1.
  bool in_positive_class() const { return on_positive_half_line() && mass_at_zero() < 1.0; }

 private:
  std::variant<AtomicMeasure, SemicircleMeasure, DensityGridMeasure> impl_;
};

/// Grid moments are rounded to multiples of this quantum before becoming rationals.
inline constexpr long kGridMomentDenominator = 1'000'000'000'000;

/// m_1..m_order. Exact for atomic and semicircle (the semicircle parameters
/// are taken as their exact binary values); quantized trapezoid values for grids.
MomentSequence moments(const Measure& mu, std::size_t order);

/// rho_k = integral of |x|^k; exact for atomic measures only.
Rational absolute_moment(const AtomicMeasure& mu, unsigned k);

/// psi(z) = integral of z xi / (1 - z xi). Requires a half-line measure and z off [0, inf).
Complex psi(const Measure& mu, Complex z);
/// K(z) = psi(z) / (1 + psi(z)).
Complex krein_k(const Measure& mu, Complex z);

/// K(z) / z, finite at z = 0 (where it equals m_1). Used by the subordination
/// iteration; only rejects points where 1 + psi vanishes.
Complex krein_k_over_z(const Measure& mu, Complex z);

/// Exact evaluation at a rational point for atomic measures.
Rational psi_exact(const AtomicMeasure& mu, const Rational& z);
Rational krein_k_exact(const AtomicMeasure& mu, const Rational& z);

}  // namespace freeconv
