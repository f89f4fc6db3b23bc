#include "freeconv/rational.hpp"

#include <cctype>
#include <cmath>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return std::string(s);
}

// Decimal literal with optional fraction and exponent, converted exactly.
Rational parse_decimal(std::string_view s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits += s[pos++];
    seen_digit = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw ParseError("malformed rational literal '" + std::string(s) + "'");
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::string_view exponent = s.substr(pos);
    if (!is_integer_literal(exponent)) throw ParseError("malformed exponent in '" + std::string(s) + "'");
    scale += std::stol(strip_plus(exponent));
    pos = s.size();
  }
  if (pos != s.size()) throw ParseError("malformed rational literal '" + std::string(s) + "'");
  if (scale > 4000 || scale < -4000) throw ParseError("exponent out of range in '" + std::string(s) + "'");

  mpz_class numerator(digits, 10);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational value = scale < 0 ? Rational(numerator, ten_pow) : Rational(numerator * ten_pow);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational literal");

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (is_integer_literal(text)) return Rational(mpz_class(strip_plus(text), 10));
    return parse_decimal(text);
  }
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den)) {
    throw ParseError("malformed rational literal '" + std::string(text) + "'");
  }
  mpz_class d(strip_plus(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(strip_plus(num), 10), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite double to a rational");
  Rational q(x);  // GMP conversion is exact
  q.canonicalize();
  return q;
}

Rational quantize(double x, long denominator) {
  if (!std::isfinite(x)) throw DomainError("cannot quantize a non-finite double");
  const double scaled = std::nearbyint(x * static_cast<double>(denominator));
  Rational q(mpz_class(rational_from_double(scaled)), mpz_class(denominator));
  q.canonicalize();
  return q;
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

Rational catalan(unsigned n) {
  Rational c = binomial(2 * n, n) / Rational(n + 1);
  c.canonicalize();
  return c;
}

Rational power(const Rational& q, unsigned e) {
  Rational out(1);
  Rational base = q;
  while (e != 0) {
    if (e & 1u) out *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return out;
}

std::vector<std::string> to_strings(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

}  // namespace freeconv
