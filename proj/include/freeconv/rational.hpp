#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace freeconv {

/// Exact arbitrary-precision rational. Always kept in canonical form.
using Rational = mpq_class;

/// Parses "p/q", "p" or a decimal literal such as "0.25" or "-1e-3".
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

/// Rounds to the nearest multiple of 1/denominator.
Rational quantize(double x, long denominator);

Rational binomial(unsigned n, unsigned k);
Rational catalan(unsigned n);

/// q^e for e >= 0.
Rational power(const Rational& q, unsigned e);

std::vector<std::string> to_strings(const std::vector<Rational>& values);

}  // namespace freeconv
