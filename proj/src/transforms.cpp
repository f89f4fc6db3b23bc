#include "freeconv/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/error.hpp"

namespace freeconv {

BooleanCumulants boolean_from_moments(const MomentSequence& m) {
  const std::size_t d = m.order();
  std::vector<Rational> r(d);
  for (std::size_t k = 1; k <= d; ++k) {
    Rational acc = m[k];
    for (std::size_t i = 1; i < k; ++i) acc -= m[i] * r[k - i - 1];
    r[k - 1] = acc;
  }
  return BooleanCumulants(std::move(r));
}

MomentSequence moments_from_boolean(const BooleanCumulants& r) {
  const std::size_t d = r.order();
  std::vector<Rational> m(d);
  for (std::size_t k = 1; k <= d; ++k) {
    Rational acc = r[k];
    for (std::size_t i = 1; i < k; ++i) acc += r[i] * m[k - i - 1];
    m[k - 1] = acc;
  }
  return MomentSequence(std::move(m));
}

// Functional form of the non-crossing relation: M(z) = 1 + sum_s kappa_s z^s M(z)^s,
// so [z^n] gives m_n = sum_{s=1}^n kappa_s [z^{n-s}] M^s with unit coefficient on kappa_n.
FreeCumulants free_from_moments(const MomentSequence& m) {
  const std::size_t d = m.order();
  const PowerSeries series = moment_series(m);
  std::vector<Rational> kappa(d);
  PowerSeries power_s = series;  // M^s, s = 1 first
  std::vector<PowerSeries> powers;
  powers.reserve(d);
  for (std::size_t s = 1; s <= d; ++s) {
    powers.push_back(power_s);
    power_s = power_s * series;
  }
  for (std::size_t n = 1; n <= d; ++n) {
    Rational acc = m[n];
    for (std::size_t s = 1; s < n; ++s) acc -= kappa[s - 1] * powers[s - 1][n - s];
    kappa[n - 1] = acc;
  }
  return FreeCumulants(std::move(kappa));
}

MomentSequence moments_from_free(const FreeCumulants& kappa) {
  const std::size_t d = kappa.order();
  std::vector<Rational> m(d);
  for (std::size_t n = 1; n <= d; ++n) {
    // [z^{n-s}] M^s only involves m_1..m_{n-1}, which are already known.
    PowerSeries partial = PowerSeries::from_tail(Rational(1), m);
    Rational acc = kappa[n];
    PowerSeries power_s = partial;
    for (std::size_t s = 1; s < n; ++s) {
      acc += kappa[s] * power_s[n - s];
      power_s = power_s * partial;
    }
    m[n - 1] = acc;
  }
  return MomentSequence(std::move(m));
}

PowerSeries moment_series(const MomentSequence& m) { return PowerSeries::from_tail(Rational(1), m.values()); }

PowerSeries krein_series(const BooleanCumulants& r) { return PowerSeries::from_tail(Rational(0), r.values()); }

KreinExpansionReport krein_expansion_check(const Measure& mu, const MomentSequence& m, unsigned p,
                                           std::size_t grid_points) {
  if (p < 1) throw DomainError("expansion order p must be >= 1");
  if (m.order() < p) throw DomainError("moment sequence order is below the expansion order");
  if (!mu.on_positive_half_line()) throw DomainError("Krein expansion needs a measure on [0, inf)");
  if (grid_points <= kKreinBurnIn + 1) throw DomainError("grid too short for the burn-in");

  const BooleanCumulants r = boolean_from_moments(m.truncated(p));
  KreinExpansionReport report;
  report.p = p;
  report.burn_in = kKreinBurnIn;

  std::vector<Rational> exact_ratios;
  if (const auto* atomic = mu.as_atomic()) {
    report.exact = true;
    Rational x = 1;
    for (std::size_t i = 0; i < grid_points; ++i, x /= 2) {
      Rational poly = 0;
      Rational xk = 1;
      for (unsigned k = 1; k <= p; ++k) {
        xk *= x;
        poly += (k % 2 == 0 ? r[k] : Rational(-r[k])) * xk;
      }
      const Rational remainder = krein_k_exact(*atomic, -x) - poly;
      const Rational ratio = abs(remainder) / power(x, p);
      exact_ratios.push_back(ratio);
      report.rows.push_back({x.get_d(), remainder.get_d(), ratio.get_d()});
    }
  } else {
    // Cancellation in floating point swamps the remainder on finer grids.
    const std::size_t points = std::min<std::size_t>(grid_points, 10);
    double x = 1.0;
    for (std::size_t i = 0; i < points; ++i, x /= 2) {
      double poly = 0.0;
      for (unsigned k = 1; k <= p; ++k)
        poly += (k % 2 == 0 ? 1.0 : -1.0) * r[k].get_d() * std::pow(x, static_cast<double>(k));
      const double remainder = krein_k(mu, Complex(-x, 0.0)).real() - poly;
      report.rows.push_back({x, remainder, std::abs(remainder) / std::pow(x, static_cast<double>(p))});
    }
  }

  report.monotone = true;
  for (std::size_t i = kKreinBurnIn + 1; i < report.rows.size(); ++i) {
    const bool increased = report.exact ? exact_ratios[i] > exact_ratios[i - 1]
                                        : report.rows[i].ratio > report.rows[i - 1].ratio;
    if (increased) {
      report.monotone = false;
      break;
    }
  }
  report.final_ratio = report.rows.back().ratio;
  report.decays = report.monotone && report.final_ratio < kKreinDecayThreshold;
  return report;
}

}  // namespace freeconv
