#include "freeconv/power_series.hpp"

#include <algorithm>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

void require_same_order(const PowerSeries& a, const PowerSeries& b) {
  if (a.order() != b.order()) throw DomainError("power series order mismatch");
}

}  // namespace

PowerSeries::PowerSeries(std::size_t order) : coeffs_(order + 1) {}

PowerSeries::PowerSeries(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw DomainError("power series needs at least a constant term");
}

PowerSeries PowerSeries::from_tail(const Rational& constant, const std::vector<Rational>& tail) {
  std::vector<Rational> c;
  c.reserve(tail.size() + 1);
  c.push_back(constant);
  c.insert(c.end(), tail.begin(), tail.end());
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::variable(std::size_t order) {
  PowerSeries z(order);
  if (order >= 1) z[1] = 1;
  return z;
}

std::vector<Rational> PowerSeries::tail() const { return {coeffs_.begin() + 1, coeffs_.end()}; }

PowerSeries& PowerSeries::operator+=(const PowerSeries& other) {
  require_same_order(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& other) {
  require_same_order(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

PowerSeries& PowerSeries::operator*=(const Rational& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  require_same_order(a, b);
  const std::size_t d = a.order();
  PowerSeries out(d);
  for (std::size_t i = 0; i <= d; ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= d; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return out;
}

PowerSeries PowerSeries::inverse() const {
  if (sgn(coeffs_[0]) == 0) throw DomainError("power series inverse needs a nonzero constant term");
  const std::size_t d = order();
  PowerSeries out(d);
  const Rational inv0 = 1 / coeffs_[0];
  out.coeffs_[0] = inv0;
  for (std::size_t n = 1; n <= d; ++n) {
    Rational acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += coeffs_[k] * out.coeffs_[n - k];
    out.coeffs_[n] = -acc * inv0;
  }
  return out;
}

PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) { return a * b.inverse(); }

PowerSeries PowerSeries::pow(unsigned e) const {
  PowerSeries out(order());
  out.coeffs_[0] = 1;
  PowerSeries base = *this;
  while (e != 0) {
    if (e & 1u) out = out * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return out;
}

PowerSeries PowerSeries::compose(const PowerSeries& inner) const {
  require_same_order(*this, inner);
  if (sgn(inner.coeffs_[0]) != 0) throw DomainError("composition needs an inner series with zero constant term");
  // Horner: f(g) = c_0 + g (c_1 + g (c_2 + ...)).
  const std::size_t d = order();
  PowerSeries out(d);
  for (std::size_t k = d + 1; k-- > 0;) {
    out = out * inner;
    out.coeffs_[0] += coeffs_[k];
  }
  return out;
}

PowerSeries PowerSeries::shifted_up() const {
  PowerSeries out(order());
  for (std::size_t k = 1; k <= order(); ++k) out.coeffs_[k] = coeffs_[k - 1];
  return out;
}

Rational PowerSeries::evaluate(const Rational& z) const {
  Rational acc = 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
  return acc;
}

}  // namespace freeconv
