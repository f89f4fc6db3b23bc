#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "freeconv/measures.hpp"
#include "freeconv/sequences.hpp"
#include "freeconv/word_engine.hpp"

namespace freeconv {

using Matrix = Eigen::MatrixXd;

enum class EnsembleKind {
  kGoe,                  // semicircle on [-2, 2] in the limit
  kRotatedDiagonal,      // O D O^T, D i.i.d. from an atomic measure, O Haar orthogonal
  kWishart,              // G G^T / N, Marchenko-Pastur with ratio 1
};

struct MatrixEnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGoe;
  std::size_t dimension = 64;
  std::size_t count = 2;
  std::uint64_t seed = 0;
  std::optional<Measure> diagonal;  // required for kRotatedDiagonal
};

/// Upper bound on the memory held by one sampled family.
inline constexpr std::size_t kMaxFamilyBytes = std::size_t{1} << 30;

EnsembleKind parse_ensemble(const std::string& name);
std::string to_string(EnsembleKind kind);

/// Throws DomainError on a zero dimension, a family that would not fit in
/// kMaxFamilyBytes, or a rotated-diagonal spec without an atomic measure.
void validate_ensemble(const MatrixEnsembleSpec& spec);

/// Independent matrices for one trial. Trial t draws from its own stream
/// seeded from (seed, t), so results do not depend on thread scheduling.
std::vector<Matrix> sample_family(const MatrixEnsembleSpec& spec, std::uint64_t trial = 0);

/// Large-N moments of one member of the ensemble, exact.
MomentSequence ensemble_marginal(const MatrixEnsembleSpec& spec, std::size_t order);

/// tr(w)/N for a word in the given matrices.
double normalized_trace(const std::vector<Matrix>& family, const Word& w);

struct TraceEstimate {
  Word word;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Monte Carlo estimates of E tr(w)/N for each word; every trial samples one
/// family and evaluates all words on it. threads = 0 means one thread.
std::vector<TraceEstimate> estimate_word_traces(const MatrixEnsembleSpec& spec, const std::vector<Word>& words,
                                                std::size_t trials, std::size_t threads = 1);
TraceEstimate estimate_word_trace(const MatrixEnsembleSpec& spec, const Word& w, std::size_t trials,
                                  std::size_t threads = 1);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(const Matrix& symmetric);

/// Singular values via the eigenvalues of x^T x.
std::vector<double> singular_values(const Matrix& x);

/// (tr|x|^p / N)^{1/p} with |x| = (x^T x)^{1/2}; p = infinity gives the operator norm.
double nc_lp_norm(const Matrix& x, double p);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// lhs <= rhs up to a relative slack of 1e-9.
InequalityCheck compare(double lhs, double rhs);

/// ||a x b||_p <= ||a||_inf ||x||_p ||b||_inf.
InequalityCheck check_ideal(const Matrix& a, const Matrix& x, const Matrix& b, double p);
/// |tr(x_1 ... x_n)/N| <= prod ||x_j||_{p_j} with sum 1/p_j = 1.
InequalityCheck check_trace_holder(const std::vector<Matrix>& xs, const std::vector<double>& ps);
/// ||x_1 ... x_n||_1 <= prod ||x_j||_{p_j} with sum 1/p_j = 1.
InequalityCheck check_l1_holder(const std::vector<Matrix>& xs, const std::vector<double>& ps);
/// ||x + y||_p <= ||x||_p + ||y||_p.
InequalityCheck check_minkowski(const Matrix& x, const Matrix& y, double p);

/// ||T_{k_1}^{n_1} ... T_{k_s}^{n_s}||_1 bounded by the chain of norms that
/// splits off one mixed pair (even total degree d, exponent d) or two mixed
/// pairs (odd total degree, exponent d - 1). Three-letter odd words need
/// n_2 >= 2.
InequalityCheck check_power_chain(const std::vector<Matrix>& ts, const std::vector<unsigned>& exponents);

struct InequalityFamilyStats {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
};

struct InequalitySweepReport {
  std::vector<InequalityFamilyStats> families;
  std::size_t total_checked() const;
  std::size_t total_violations() const;
};

/// Random small-dimension instances of every inequality family above,
/// `instances` in total, reproducible from the seed.
InequalitySweepReport verify_inequalities(std::size_t instances, std::uint64_t seed, std::size_t dimension = 6);

}  // namespace freeconv
