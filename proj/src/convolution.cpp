#include "freeconv/convolution.hpp"

#include "freeconv/error.hpp"
#include "freeconv/transforms.hpp"
#include "freeconv/word_engine.hpp"

namespace freeconv {

namespace {

void require_boxtimes_inputs(const MomentSequence& m1, const MomentSequence& m2, std::size_t p) {
  if (p < 1) throw DomainError("boxtimes order p must be >= 1");
  if (m1.order() < p || m2.order() < p) {
    throw DomainError("boxtimes needs moment sequences of order >= " + std::to_string(p));
  }
  if (sgn(m1[1]) == 0 || sgn(m2[1]) == 0) {
    throw DomainError("boxtimes needs nonzero first moments (the subordination seed is -r_1 x)");
  }
}

// H(w) = K(w)/w = r_1 + r_2 w + ... + r_p w^{p-1}, as a series of order p.
PowerSeries krein_quotient(const BooleanCumulants& r, std::size_t p) {
  PowerSeries h(p);
  for (std::size_t k = 1; k <= p; ++k) h[k - 1] = r[k];
  return h;
}

std::vector<Rational> signed_coefficients(const PowerSeries& z) {
  std::vector<Rational> t;
  for (std::size_t k = 1; k <= z.order(); ++k) t.push_back(k % 2 == 0 ? z[k] : Rational(-z[k]));
  return t;
}

}  // namespace

MomentSequence boxplus_moments(const MomentSequence& m1, const MomentSequence& m2) {
  if (m1.order() != m2.order()) throw DomainError("boxplus needs moment sequences of equal order");
  const FreeCumulants k1 = free_from_moments(m1);
  const FreeCumulants k2 = free_from_moments(m2);
  std::vector<Rational> sum(k1.order());
  for (std::size_t k = 1; k <= k1.order(); ++k) sum[k - 1] = k1[k] + k2[k];
  return moments_from_free(FreeCumulants(std::move(sum)));
}

std::vector<Rational> SubordinationSeries::t1() const { return signed_coefficients(z1); }
std::vector<Rational> SubordinationSeries::t2() const { return signed_coefficients(z2); }

SubordinationSeries subordination_series(const MomentSequence& m1, const MomentSequence& m2, std::size_t p) {
  require_boxtimes_inputs(m1, m2, p);
  const BooleanCumulants r1 = boolean_from_moments(m1.truncated(p));
  const BooleanCumulants r2 = boolean_from_moments(m2.truncated(p));
  const PowerSeries h1 = krein_quotient(r1, p);
  const PowerSeries h2 = krein_quotient(r2, p);

  PowerSeries z1(p);
  PowerSeries z2(p);
  z1[1] = r2[1];
  z2[1] = r1[1];
  for (std::size_t pass = 0; pass < p; ++pass) {
    PowerSeries next1 = h2.compose(z2).shifted_up();
    PowerSeries next2 = h1.compose(z1).shifted_up();
    z1 = std::move(next1);
    z2 = std::move(next2);
  }
  PowerSeries krein = krein_series(r1).compose(z1);
  return {std::move(z1), std::move(z2), std::move(krein)};
}

MomentSequence boxtimes_moments(const MomentSequence& m1, const MomentSequence& m2, std::size_t p) {
  const SubordinationSeries s = subordination_series(m1, m2, p);
  return moments_from_boolean(BooleanCumulants(s.krein.tail()));
}

MomentSequence boxtimes_word_oracle(const MomentSequence& m1, const MomentSequence& m2, std::size_t p) {
  require_boxtimes_inputs(m1, m2, p);
  MixedMomentCache cache({m1.truncated(p), m2.truncated(p)});
  std::vector<Rational> out(p);
  std::vector<std::size_t> letters;
  for (std::size_t k = 1; k <= p; ++k) {
    letters.push_back(0);
    letters.push_back(1);
    out[k - 1] = cache(Word(letters));
  }
  return MomentSequence(std::move(out));
}

MomentSequence boxplus_word_oracle(const MomentSequence& m1, const MomentSequence& m2, std::size_t p) {
  if (p < 1 || m1.order() < p || m2.order() < p) throw DomainError("boxplus oracle needs orders >= p");
  MixedMomentCache cache({m1.truncated(p), m2.truncated(p)});
  std::vector<Rational> out(p);
  std::vector<std::size_t> letters;
  for (std::size_t k = 1; k <= p; ++k) {
    Rational acc = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      letters.assign(k, 0);
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) letters[i] = 1;
      acc += cache(Word(letters));
    }
    out[k - 1] = acc;
  }
  return MomentSequence(std::move(out));
}

}  // namespace freeconv
