#include <cmath>
#include <limits>

#include "doctest.h"
#include "freeconv/error.hpp"
#include "freeconv/matrix_lab.hpp"
#include "test_support.hpp"

using namespace freeconv;
using testing_support::q;

namespace {

MatrixEnsembleSpec goe(std::size_t n, std::size_t count, std::uint64_t seed) {
  MatrixEnsembleSpec spec;
  spec.kind = EnsembleKind::kGoe;
  spec.dimension = n;
  spec.count = count;
  spec.seed = seed;
  return spec;
}

MatrixEnsembleSpec rotated_bernoulli(std::size_t n, std::uint64_t seed) {
  MatrixEnsembleSpec spec;
  spec.kind = EnsembleKind::kRotatedDiagonal;
  spec.dimension = n;
  spec.count = 2;
  spec.seed = seed;
  spec.diagonal = Measure::bernoulli(q("1/2"));
  return spec;
}

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
  const auto a = sample_family(goe(64, 2, 99), 3);
  const auto b = sample_family(goe(64, 2, 99), 3);
  const auto c = sample_family(goe(64, 2, 100), 3);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK_FALSE(a[0] == c[0]);
  CHECK(a[0] == a[0].transpose());
}

TEST_CASE("ensemble sanity at N = 256") {
  const auto family = sample_family(goe(256, 1, 1));
  const double m2 = normalized_trace(family, Word::parse("T1^2"));
  CHECK(m2 >= 0.85);
  CHECK(m2 <= 1.15);
  const auto rot = sample_family(rotated_bernoulli(256, 2));
  CHECK(std::abs(normalized_trace(rot, Word::parse("T1")) - 0.5) < 0.1);
  CHECK((rot[0] * rot[0] - rot[0]).norm() < 1e-9);  // still a projection after rotation
}

TEST_CASE("Haar rotation is orthogonal and the marginal moments are exact") {
  MatrixEnsembleSpec spec = rotated_bernoulli(32, 5);
  const auto m = ensemble_marginal(spec, 3);
  CHECK(m[1] == Rational(1, 2));
  spec.kind = EnsembleKind::kWishart;
  CHECK(ensemble_marginal(spec, 3)[3] == 5);
  spec.kind = EnsembleKind::kGoe;
  CHECK(ensemble_marginal(spec, 4)[4] == 2);
}

TEST_CASE("trace estimates agree with exact values") {
  const auto est = estimate_word_traces(rotated_bernoulli(128, 7), {Word::parse("T1 T2 T1 T2")}, 40);
  CHECK(std::abs(est[0].mean - 3.0 / 16.0) <= 3 * est[0].standard_error + 5.0 / 128);
  const auto g = estimate_word_trace(goe(128, 2, 8), Word::parse("T1 T2"), 40);
  CHECK(std::abs(g.mean) <= 3 * g.standard_error + 5.0 / 128);
  const auto g4 = estimate_word_trace(goe(128, 1, 8), Word::parse("T1^4"), 40);
  CHECK(std::abs(g4.mean - 2.0) <= 3 * g4.standard_error + 5.0 / 128);
}

TEST_CASE("estimates do not depend on the thread count") {
  const auto spec = goe(48, 2, 11);
  const std::vector<Word> words = {Word::parse("T1 T2 T1 T2"), Word::parse("T1^2 T2^2")};
  const auto one = estimate_word_traces(spec, words, 12, 1);
  const auto four = estimate_word_traces(spec, words, 12, 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    CHECK(one[i].mean == four[i].mean);
    CHECK(one[i].standard_error == four[i].standard_error);
  }
}

TEST_CASE("trace folding of cyclic runs") {
  const auto family = sample_family(goe(16, 2, 3));
  const Matrix direct = family[0] * family[1] * family[1] * family[0];
  CHECK(normalized_trace(family, Word::parse("T1 T2^2 T1")) == doctest::Approx(direct.trace() / 16).epsilon(1e-12));
}

TEST_CASE("ensemble guards") {
  CHECK_THROWS_AS(sample_family(goe(0, 1, 0)), DomainError);
  CHECK_THROWS_AS(sample_family(goe(1u << 20, 4, 0)), DomainError);
  MatrixEnsembleSpec bad = rotated_bernoulli(8, 0);
  bad.diagonal.reset();
  CHECK_THROWS_AS(sample_family(bad), DomainError);
  CHECK_THROWS_AS(estimate_word_trace(goe(8, 1, 0), Word::parse("T1 T2"), 4), DomainError);
  CHECK_THROWS_AS(estimate_word_trace(goe(8, 1, 0), Word::parse("T1"), 1), DomainError);
  CHECK_THROWS_AS(parse_ensemble("gue"), ParseError);
}

TEST_CASE("Jacobi eigenvalues and Schatten norms") {
  CHECK(nc_lp_norm(Matrix::Identity(5, 5), 3.0) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3.0;
  CHECK(nc_lp_norm(d, 1.0) == doctest::Approx(1.0));
  const auto x = sample_family(goe(20, 1, 4))[0];
  CHECK(nc_lp_norm(x, 2.0) * nc_lp_norm(x, 2.0) == doctest::Approx((x * x).trace() / 20).epsilon(1e-12));
  const auto ev = jacobi_eigenvalues(x);
  Eigen::SelfAdjointEigenSolver<Matrix> reference(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    CHECK(ev[static_cast<std::size_t>(i)] == doctest::Approx(reference.eigenvalues()(i)).epsilon(1e-12));
  CHECK(nc_lp_norm(x, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(reference.eigenvalues().cwiseAbs().maxCoeff()));
  CHECK_THROWS_AS(nc_lp_norm(x, 0.0), DomainError);
  CHECK_THROWS_AS(jacobi_eigenvalues(Matrix::Zero(2, 3)), DomainError);
}

TEST_CASE("inequality checkers") {
  const auto fam = sample_family(goe(10, 3, 21));
  CHECK(check_trace_holder({fam[0], fam[1]}, {2.0, 2.0}).holds);
  CHECK(check_l1_holder({fam[0], fam[1], fam[2]}, {3.0, 3.0, 3.0}).holds);
  CHECK(check_minkowski(fam[0], fam[1], 4.0).holds);
  CHECK(check_ideal(fam[0], fam[1], fam[2], 1.5).holds);
  CHECK(check_power_chain({fam[0], fam[1]}, {2, 2}).holds);
  CHECK(check_power_chain({fam[0], fam[1], fam[2]}, {1, 2, 2}).holds);
  CHECK(check_power_chain({fam[0], fam[1], fam[2], fam[0]}, {1, 1, 1, 2}).holds);
  CHECK_THROWS_AS(check_trace_holder({fam[0], fam[1]}, {2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(check_power_chain({fam[0], fam[1], fam[2]}, {1, 1, 1}), DomainError);
  CHECK_THROWS_AS(check_power_chain({fam[0], fam[1]}, {1, 2}), DomainError);
  CHECK_FALSE(compare(1.0 + 1e-6, 1.0).holds);
  CHECK(compare(1.0 + 1e-12, 1.0).holds);
}

TEST_CASE("Monte Carlo inequality sweep") {
  std::size_t minkowski_p4 = 0;
  const auto fam = sample_family(goe(8, 5, 5));
  Matrix sum = Matrix::Zero(8, 8);
  double rhs = 0.0;
  for (const auto& m : fam) {
    sum += m;
    rhs += nc_lp_norm(m, 4.0);
  }
  if (nc_lp_norm(sum, 4.0) <= rhs) ++minkowski_p4;
  CHECK(minkowski_p4 == 1);

  std::size_t triples = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto f = sample_family(goe(6, 3, 77), t);
    if (check_l1_holder(f, {3.0, 3.0, 3.0}).holds && check_trace_holder(f, {3.0, 3.0, 3.0}).holds) ++triples;
  }
  CHECK(triples == 1000);

  const auto rep = verify_inequalities(700, 13);
  CHECK(rep.total_checked() == 700);
  CHECK(rep.total_violations() == 0);
  for (const auto& f : rep.families) CHECK(f.checked == 100);
}
