#pragma once

#include <cstddef>
#include <vector>

#include "freeconv/rational.hpp"

namespace freeconv {

/// Truncated formal power series c_0 + c_1 z + ... + c_D z^D with exact
/// rational coefficients. All arithmetic is closed at the truncation order.
class PowerSeries {
 public:
  /// Zero series of order `order`.
  explicit PowerSeries(std::size_t order);
  /// Coefficients c_0..c_D; the order is coefficients.size() - 1.
  explicit PowerSeries(std::vector<Rational> coefficients);

  /// c_0 = constant, c_k = tail[k-1].
  static PowerSeries from_tail(const Rational& constant, const std::vector<Rational>& tail);
  /// The series z at the given order.
  static PowerSeries variable(std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return coeffs_[k]; }
  Rational& operator[](std::size_t k) { return coeffs_[k]; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  /// c_1..c_D.
  std::vector<Rational> tail() const;

  PowerSeries& operator+=(const PowerSeries& other);
  PowerSeries& operator-=(const PowerSeries& other);
  PowerSeries& operator*=(const Rational& scalar);

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, const Rational& s) { return a *= s; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  /// Requires b[0] != 0.
  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b);
  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.coeffs_ == b.coeffs_; }

  /// Multiplicative inverse; requires c_0 != 0.
  PowerSeries inverse() const;
  PowerSeries pow(unsigned e) const;
  /// f(g(z)); requires g[0] == 0.
  PowerSeries compose(const PowerSeries& inner) const;
  /// Multiplies by z, dropping the coefficient pushed past the order.
  PowerSeries shifted_up() const;

  Rational evaluate(const Rational& z) const;

 private:
  std::vector<Rational> coeffs_;
};

}  // namespace freeconv
