#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "freeconv/error.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/word_engine.hpp"
#include "test_support.hpp"

using namespace freeconv;
using testing_support::q;
using testing_support::qs;

namespace {

MomentSequence bernoulli_moments(std::size_t order) { return moments(Measure::bernoulli(q("1/2")), order); }
MomentSequence semicircle_moments(std::size_t order) { return moments(Measure(SemicircleMeasure(0, 2)), order); }

}  // namespace

TEST_CASE("NC enumeration counts and validity") {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::size_t count = 0;
    std::set<std::vector<std::vector<std::size_t>>> seen;
    enumerate_nc(n, [&](const NonCrossingPartition& p) {
      ++count;
      CHECK(is_non_crossing(p));
      seen.insert(p.blocks);
    });
    CHECK(count == catalan(static_cast<unsigned>(n)).get_num().get_ui());
    CHECK(seen.size() == count);
  }
  CHECK_THROWS_AS(enumerate_nc(0, [](const NonCrossingPartition&) {}), DomainError);
  CHECK_THROWS_AS(enumerate_nc(15, [](const NonCrossingPartition&) {}), DomainError);
  CHECK_FALSE(is_non_crossing({4, {{0, 2}, {1, 3}}}));
  CHECK(is_non_crossing({4, {{0, 3}, {1, 2}}}));
}

TEST_CASE("word parsing") {
  const auto w = Word::parse("T1^2 T2 T1 T3^3");
  CHECK(w.letters() == std::vector<std::size_t>{0, 0, 1, 0, 2, 2, 2});
  CHECK(w.to_string() == "T1^2 T2 T1 T3^3");
  CHECK(w.variable_span() == 3);
  CHECK(w.multiplicity(0) == 3);
  CHECK(Word::parse("T1T2T1T2").size() == 4);
  CHECK_THROWS_AS(Word::parse(""), ParseError);
  CHECK_THROWS_AS(Word::parse("X1"), ParseError);
  CHECK_THROWS_AS(Word::parse("T0"), ParseError);
  CHECK_THROWS_AS(Word::parse("T1^0"), ParseError);
}

TEST_CASE("mixed moment examples") {
  const MomentSequence a(qs({"3/4"})), b(qs({"-2"}));
  CHECK(mixed_moment({a, b}, Word::parse("T1 T2")) == Rational(-3, 2));
  CHECK(mixed_moment({bernoulli_moments(2), bernoulli_moments(2)}, Word::parse("T1 T2 T1 T2")) == Rational(3, 16));
  CHECK(mixed_moment({semicircle_moments(2), semicircle_moments(2)}, Word::parse("T1 T2 T1 T2")) == 0);
  CHECK_THROWS_AS(mixed_moment({bernoulli_moments(1), bernoulli_moments(2)}, Word::parse("T1 T2 T1 T2")),
                  DomainError);
  CHECK_THROWS_AS(mixed_moment({bernoulli_moments(4)}, Word::parse("T1 T2")), DomainError);
}

TEST_CASE("single variable recovers the marginal") {
  std::mt19937_64 rng(3);
  const MomentSequence m(testing_support::random_vector(rng, 9));
  for (unsigned k = 1; k <= 9; ++k) CHECK(mixed_moment({m}, Word::from_powers({{0, k}})) == m[k]);
}

TEST_CASE("interval recursion agrees with brute-force enumeration") {
  std::mt19937_64 rng(42);
  const std::vector<MomentSequence> marginals = {
      MomentSequence(testing_support::random_vector(rng, 10)),
      MomentSequence(testing_support::random_vector(rng, 10)),
      MomentSequence(testing_support::random_vector(rng, 10)),
  };
  std::uniform_int_distribution<std::size_t> len(1, 10), var(0, 2);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::size_t> letters(len(rng));
    for (auto& l : letters) l = var(rng);
    const Word w(letters);
    CHECK(mixed_moment(marginals, w) == mixed_moment_enumerated(marginals, w));
  }
}

TEST_CASE("trace property: cyclic invariance for all words up to length 6") {
  std::mt19937_64 rng(8);
  const std::vector<MomentSequence> marginals = {
      MomentSequence(testing_support::random_vector(rng, 6)),
      MomentSequence(testing_support::random_vector(rng, 6)),
      MomentSequence(testing_support::random_vector(rng, 6)),
  };
  MixedMomentCache cache(marginals);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> letters(n);
      std::size_t c = code;
      for (auto& l : letters) {
        l = c % 3;
        c /= 3;
      }
      const Rational base = cache(Word(letters));
      std::rotate(letters.begin(), letters.begin() + 1, letters.end());
      CHECK(cache(Word(letters)) == base);
    }
  }
}

TEST_CASE("alternating centered words vanish") {
  SUBCASE("two variables, first powers") {
    const auto rep = alternating_centered_check({bernoulli_moments(4), semicircle_moments(4)}, 4);
    CHECK(rep.all_zero());
    CHECK(rep.entries.size() == 2 + 2 + 2 + 2);
  }
  SUBCASE("two variables, centered squares") {
    const auto rep = alternating_centered_check({bernoulli_moments(8), semicircle_moments(8)}, 4, {{2}, false});
    CHECK(rep.all_zero());
  }
  SUBCASE("three variables, mixed exponents") {
    const MomentSequence skew(qs({"1", "3", "2", "7", "-1", "11", "5", "13", "2", "4"}));
    const auto rep =
        alternating_centered_check({bernoulli_moments(10), semicircle_moments(10), skew}, 5, {{1, 2}, true});
    CHECK(rep.all_zero());
    CHECK(rep.entries.size() > 100);
  }
  SUBCASE("non-alternating word is not forced to vanish") {
    MixedMomentCache cache({bernoulli_moments(4), bernoulli_moments(4)});
    CHECK(centered_product_moment(cache, {{0, 1}, {0, 1}}) == Rational(1, 4));
  }
}
