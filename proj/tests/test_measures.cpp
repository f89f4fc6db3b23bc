#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "freeconv/error.hpp"
#include "freeconv/measures.hpp"
#include "test_support.hpp"

using namespace freeconv;
using testing_support::q;
using testing_support::qs;

namespace {

Measure bern() { return Measure::bernoulli(q("1/2")); }

double semicircle_quadrature(double m, double r, int k) {
  auto density = [&](double x) {
    const double s = r * r - (x - m) * (x - m);
    return s > 0.0 ? 2.0 / (std::numbers::pi * r * r) * std::sqrt(s) * std::pow(x, k) : 0.0;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, m - r, m + r, 15, 1e-14);
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(q("2/4")) == "1/2");
  CHECK(to_string(q("-3")) == "-3");
  CHECK(q("0.25") == Rational(1, 4));
  CHECK(q("-1e-3") == Rational(-1, 1000));
  CHECK(q("1.5e2") == 150);
  CHECK_THROWS_AS(q("1/0"), ParseError);
  CHECK_THROWS_AS(q("abc"), ParseError);
  CHECK_THROWS_AS(q(""), ParseError);
  CHECK(catalan(4) == 14);
  CHECK(binomial(6, 2) == 15);
  CHECK(rational_from_double(0.375) == Rational(3, 8));
}

TEST_CASE("moment examples") {
  CHECK(moments(Measure::point_mass(1), 4).values() == qs({"1", "1", "1", "1"}));
  CHECK(moments(Measure(SemicircleMeasure(0, 2)), 6).values() == qs({"0", "1", "0", "2", "0", "5"}));
  CHECK(moments(bern(), 3).values() == qs({"1/2", "1/2", "1/2"}));
  CHECK(moments(bern(), 3).positive_measure());
  CHECK_THROWS_AS(moments(bern(), 0), DomainError);
}

TEST_CASE("semicircle moments agree with quadrature of the density") {
  for (auto [m, r] : {std::pair{0.0, 2.0}, std::pair{0.5, 1.5}, std::pair{-1.0, 0.75}}) {
    const auto seq = moments(Measure(SemicircleMeasure(m, r)), 10);
    for (int k = 1; k <= 10; ++k) {
      const double expected = semicircle_quadrature(m, r, k);
      CHECK(seq[k].get_d() == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("measure construction validates input") {
  CHECK_THROWS_AS(Measure::atomic({{q("1"), q("1/2")}}), DomainError);
  CHECK_THROWS_AS(Measure::atomic({{q("1"), q("3/2")}, {q("2"), q("-1/2")}}), DomainError);
  CHECK_THROWS_AS(SemicircleMeasure(0, 0), DomainError);
  CHECK_THROWS_AS(DensityGridMeasure({0.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(DensityGridMeasure({0.0, 1.0}, {1.0, -1.0}), DomainError);
  const auto merged = Measure::atomic({{q("1"), q("1/4")}, {q("1"), q("1/4")}, {q("0"), q("1/2")}});
  REQUIRE(merged.as_atomic()->atoms().size() == 2);
  CHECK(merged.as_atomic()->atoms()[1].weight == Rational(1, 2));
}

TEST_CASE("grid measure moments are quantized trapezoid values") {
  std::vector<double> x, f;
  for (int i = 0; i <= 2000; ++i) {
    x.push_back(i / 2000.0);
    f.push_back(1.0);
  }
  const auto seq = moments(Measure(DensityGridMeasure(x, f)), 2);
  CHECK(seq[1] == Rational(1, 2));
  CHECK(std::abs(seq[2].get_d() - 1.0 / 3.0) < 1e-6);
  CHECK(Measure(DensityGridMeasure(x, f)).on_positive_half_line());
}

TEST_CASE("psi and K examples") {
  const Complex z(-0.3, 0.7);
  const double c = 1.5;
  CHECK(std::abs(psi(Measure::point_mass(q("3/2")), z) - z * c / (1.0 - z * c)) < 1e-14);
  CHECK(std::abs(psi(Measure::point_mass(1), -1.0) - Complex(-0.5)) < 1e-15);
  for (double x : {0.1, 1.0, 7.0}) {
    CHECK(std::abs(psi(bern(), -x) - Complex(-x / (2.0 * (1.0 + x)))) < 1e-15);
  }
  CHECK(std::abs(krein_k(Measure::point_mass(q("3/2")), z) - c * z) < 1e-14);
  CHECK(std::abs(krein_k(Measure::point_mass(1), -0.5) - Complex(-0.5)) < 1e-15);
  CHECK(std::abs(krein_k(bern(), -1.0) - Complex(-1.0 / 3.0)) < 1e-15);
  CHECK(krein_k_exact(*bern().as_atomic(), Rational(-1)) == Rational(-1, 3));
  CHECK(psi_exact(*bern().as_atomic(), Rational(-1)) == Rational(-1, 4));
}

TEST_CASE("psi rejects invalid inputs") {
  CHECK_THROWS_AS(psi(bern(), Complex(0.5, 0.0)), DomainError);
  CHECK_THROWS_AS(psi(bern(), Complex(0.5, 1e-15)), DomainError);
  CHECK_THROWS_AS(psi(Measure(SemicircleMeasure(0, 2)), Complex(-1.0)), DomainError);
  CHECK_THROWS_AS(psi(Measure::atomic({{q("-1"), q("1/2")}, {q("1"), q("1/2")}}), Complex(-1.0)), DomainError);
}

TEST_CASE("Krein class properties on the negative axis") {
  const std::vector<Measure> suite = {
      bern(),
      Measure::point_mass(q("2")),
      Measure::atomic({{q("1"), q("1/2")}, {q("2"), q("1/2")}}),
      Measure::atomic({{q("0"), q("1/3")}, {q("1/2"), q("1/3")}, {q("5"), q("1/3")}}),
  };
  for (const auto& mu : suite) {
    double prev = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double x = std::pow(10.0, -5.0 + 6.0 * i / 60.0);
      const Complex k = krein_k(mu, -x);
      CHECK(std::abs(k.imag()) == 0.0);
      CHECK(k.real() <= 0.0);
      CHECK(k.real() < prev);
      // K itself is unbounded (K = -c x for a point mass); psi stays in (-1, 0].
      const Complex p = psi(mu, -x);
      CHECK(p.real() <= 0.0);
      CHECK(p.real() > -1.0);
      prev = k.real();
    }
  }
}

TEST_CASE("psi conjugate symmetry at random upper half plane points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(1e-3, 5.0);
  const auto mu = Measure::atomic({{q("0"), q("1/4")}, {q("1/3"), q("1/4")}, {q("2"), q("1/2")}});
  for (int i = 0; i < 100; ++i) {
    const Complex z(re(rng), im(rng));
    CHECK(std::abs(psi(mu, std::conj(z)) - std::conj(psi(mu, z))) < 1e-12);
  }
}

TEST_CASE("support helpers") {
  CHECK(bern().mass_at_zero() == 0.5);
  CHECK(bern().in_positive_class());
  CHECK_FALSE(Measure::point_mass(0).in_positive_class());
  CHECK(Measure(SemicircleMeasure(3, 1)).support_bound() == 4.0);
  CHECK_FALSE(Measure(SemicircleMeasure(0, 2)).on_positive_half_line());
  const auto mu = Measure::atomic({{q("-2"), q("1/2")}, {q("1"), q("1/2")}});
  CHECK(absolute_moment(*mu.as_atomic(), 1) == Rational(3, 2));
}
