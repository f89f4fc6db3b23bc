#include "freeconv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

constexpr double kAxisTolerance = 1e-14;

void require_psi_domain(const Measure& mu, Complex z) {
  if (mu.as_semicircle() != nullptr) {
    throw DomainError("psi and K are only evaluated for atomic or grid measures on [0, inf)");
  }
  if (!mu.on_positive_half_line()) throw DomainError("psi requires a measure supported on [0, inf)");
  if (std::abs(z.imag()) <= kAxisTolerance && z.real() >= -kAxisTolerance) {
    throw DomainError("psi is undefined on the positive real axis");
  }
}

// Integral of xi / (1 - z xi), i.e. psi(z) / z.
Complex psi_over_z(const Measure& mu, Complex z) {
  if (const auto* a = mu.as_atomic()) {
    Complex acc = 0.0;
    for (const auto& atom : a->atoms()) {
      const double xi = atom.location.get_d();
      if (xi == 0.0) continue;
      const Complex denom = 1.0 - z * xi;
      if (std::abs(denom) < kAxisTolerance) throw DomainError("psi evaluated at a pole");
      acc += atom.weight.get_d() * xi / denom;
    }
    return acc;
  }
  if (const auto* g = mu.as_grid()) {
    return g->integrate([z](double xi) -> Complex {
      const Complex denom = 1.0 - z * xi;
      if (std::abs(denom) < kAxisTolerance) throw DomainError("psi evaluated at a pole");
      return xi / denom;
    });
  }
  throw DomainError("psi and K are only evaluated for atomic or grid measures on [0, inf)");
}

Complex krein_from_psi(Complex p) {
  const Complex denom = 1.0 + p;
  if (std::abs(denom) < kAxisTolerance) throw DomainError("K evaluated too close to a pole (1 + psi = 0)");
  return p / denom;
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("atomic measure needs at least one atom");
  std::map<Rational, Rational> merged;
  Rational total = 0;
  for (auto& a : atoms) {
    if (sgn(a.weight) <= 0) throw DomainError("atom weights must be positive");
    merged[a.location] += a.weight;
    total += a.weight;
  }
  if (total != 1) throw DomainError("atom weights sum to " + to_string(total) + ", expected 1");
  atoms_.reserve(merged.size());
  for (auto& [loc, w] : merged) atoms_.push_back({loc, w});
}

SemicircleMeasure::SemicircleMeasure(double c, double r) : center(c), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(c)) throw DomainError("semicircle radius must be positive");
}

DensityGridMeasure::DensityGridMeasure(std::vector<double> abscissae, std::vector<double> density)
    : x_(std::move(abscissae)), f_(std::move(density)) {
  if (x_.size() < 2) throw DomainError("density grid needs at least 2 nodes");
  if (x_.size() != f_.size()) throw DomainError("density grid abscissae and values differ in length");
  for (std::size_t i = 0; i + 1 < x_.size(); ++i)
    if (!(x_[i] < x_[i + 1])) throw DomainError("density grid abscissae must be strictly ascending");
  for (double v : f_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("density values must be finite and nonnegative");
  const double mass = integrate([](double) { return 1.0; });
  if (!(mass > 0.0)) throw DomainError("density grid has zero mass");
  for (double& v : f_) v /= mass;
}

Measure Measure::point_mass(const Rational& c) { return AtomicMeasure({{c, Rational(1)}}); }

Measure Measure::bernoulli(const Rational& p) {
  if (p == 1) return point_mass(1);
  if (p == 0) return point_mass(0);
  return AtomicMeasure({{Rational(0), Rational(1 - p)}, {Rational(1), p}});
}

Measure Measure::atomic(std::vector<Atom> atoms) { return AtomicMeasure(std::move(atoms)); }

bool Measure::on_positive_half_line() const {
  switch (kind()) {
    case Kind::kAtomic:
      return sgn(as_atomic()->atoms().front().location) >= 0;  // atoms are sorted
    case Kind::kSemicircle:
      return as_semicircle()->center - as_semicircle()->radius >= 0.0;
    case Kind::kDensityGrid: {
      const auto* g = as_grid();
      // Every trapezoid panel reaching below 0 must carry zero density at both ends.
      for (std::size_t i = 0; i + 1 < g->x().size(); ++i) {
        if (g->x()[i] >= 0.0) break;
        if (g->f()[i] > 0.0 || g->f()[i + 1] > 0.0) return false;
      }
      return true;
    }
  }
  return false;
}

double Measure::mass_at_zero() const {
  if (const auto* a = as_atomic()) {
    for (const auto& atom : a->atoms())
      if (sgn(atom.location) == 0) return atom.weight.get_d();
  }
  return 0.0;
}

double Measure::support_bound() const {
  switch (kind()) {
    case Kind::kAtomic: {
      double b = 0.0;
      for (const auto& atom : as_atomic()->atoms()) b = std::max(b, std::abs(atom.location.get_d()));
      return b;
    }
    case Kind::kSemicircle:
      return std::abs(as_semicircle()->center) + as_semicircle()->radius;
    case Kind::kDensityGrid:
      return std::max(std::abs(as_grid()->x().front()), std::abs(as_grid()->x().back()));
  }
  return 0.0;
}

MomentSequence moments(const Measure& mu, std::size_t order) {
  if (order < 1) throw DomainError("moment order must be >= 1");
  std::vector<Rational> m(order);
  switch (mu.kind()) {
    case Measure::Kind::kAtomic:
      for (const auto& atom : mu.as_atomic()->atoms()) {
        Rational p = atom.weight;
        for (std::size_t k = 0; k < order; ++k) {
          p *= atom.location;
          m[k] += p;
        }
      }
      break;
    case Measure::Kind::kSemicircle: {
      const auto& s = *mu.as_semicircle();
      const Rational center = rational_from_double(s.center);
      const Rational quarter_r2 = power(rational_from_double(s.radius), 2) / 4;
      // Centered moments: Catalan(k) (r/2)^{2k} at even orders.
      std::vector<Rational> centered(order + 1);
      centered[0] = 1;
      for (std::size_t k = 2; k <= order; k += 2)
        centered[k] = catalan(static_cast<unsigned>(k / 2)) * power(quarter_r2, static_cast<unsigned>(k / 2));
      for (std::size_t n = 1; n <= order; ++n) {
        Rational acc = 0;
        for (std::size_t j = 0; j <= n; j += 2)
          acc += binomial(static_cast<unsigned>(n), static_cast<unsigned>(j)) *
                 power(center, static_cast<unsigned>(n - j)) * centered[j];
        m[n - 1] = acc;
      }
      break;
    }
    case Measure::Kind::kDensityGrid: {
      const auto& g = *mu.as_grid();
      for (std::size_t k = 1; k <= order; ++k) {
        const double v = g.integrate([k](double x) { return std::pow(x, static_cast<double>(k)); });
        m[k - 1] = quantize(v, kGridMomentDenominator);
      }
      break;
    }
  }
  MomentSequence probe(m);
  bool psd = hankel_psd(probe, 0);
  if (psd && mu.on_positive_half_line()) psd = hankel_psd(probe, 1);
  return MomentSequence(std::move(m), psd);
}

Rational absolute_moment(const AtomicMeasure& mu, unsigned k) {
  Rational acc = 0;
  for (const auto& atom : mu.atoms()) acc += atom.weight * power(abs(atom.location), k);
  return acc;
}

Complex psi(const Measure& mu, Complex z) {
  require_psi_domain(mu, z);
  return z * psi_over_z(mu, z);
}

Complex krein_k(const Measure& mu, Complex z) {
  require_psi_domain(mu, z);
  return krein_from_psi(z * psi_over_z(mu, z));
}

Complex krein_k_over_z(const Measure& mu, Complex z) {
  if (mu.as_semicircle() != nullptr || !mu.on_positive_half_line()) {
    throw DomainError("K is only evaluated for atomic or grid measures on [0, inf)");
  }
  const Complex q = psi_over_z(mu, z);
  const Complex denom = 1.0 + z * q;
  if (std::abs(denom) < kAxisTolerance) throw DomainError("K evaluated too close to a pole (1 + psi = 0)");
  return q / denom;
}

Rational psi_exact(const AtomicMeasure& mu, const Rational& z) {
  Rational acc = 0;
  for (const auto& atom : mu.atoms()) {
    const Rational zx = z * atom.location;
    if (zx == 1) throw DomainError("psi evaluated at a pole");
    acc += atom.weight * zx / (1 - zx);
  }
  return acc;
}

Rational krein_k_exact(const AtomicMeasure& mu, const Rational& z) {
  const Rational p = psi_exact(mu, z);
  if (p == -1) throw DomainError("K evaluated at a pole (1 + psi = 0)");
  return p / (1 + p);
}

}  // namespace freeconv
