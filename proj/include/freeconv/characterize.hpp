#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "freeconv/rational.hpp"
#include "freeconv/sequences.hpp"
#include "freeconv/word_engine.hpp"

namespace freeconv {

/// Symmetric matrix A and vector b defining L = sum_j b_j T_j and
/// Q = sum_{j,k} a_jk T_j T_k.
struct QuadraticFormSpec {
  QuadraticFormSpec(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

  std::size_t n() const noexcept { return b.size(); }

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
};

/// Sample mean b_j = 1/n and sample variance a_jk = delta_jk/n - 1/n^2.
QuadraticFormSpec preset_sample_mean_variance(std::size_t n);

struct ValidityReport {
  bool symmetric = false;
  bool annihilates = false;          // A b = 0
  bool power_sums_first_n = false;   // sum_j b_j^m a_jj != 0 for m = 1..n
  bool power_sums_all = false;       // ... for every m >= 1 (certified)
  std::optional<unsigned> first_vanishing_power;  // smallest m with a vanishing power sum
  unsigned certified_through = 0;    // powers checked explicitly; beyond it a dominant term wins
  bool diagonal_coupling = false;    // b_j a_jj != 0 for some j

  bool passes() const noexcept { return symmetric && annihilates && power_sums_all && diagonal_coupling; }
  /// Human-readable name of the first failing condition, empty if all pass.
  std::string failing_condition() const;
};

/// Exact check of every condition. The power-sum condition quantifies over
/// all m; it is settled by grouping equal |b_j| per parity of m and finding
/// an explicit M beyond which the largest surviving |b_j|^m term dominates,
/// then checking m = 1..M exactly.
ValidityReport validate_spec(const QuadraticFormSpec& spec);

enum class Form { kLinear, kQuadratic };

struct FormPower {
  Form form;
  unsigned exponent;
};

/// Degree in the T variables: 1 per L, 2 per Q.
unsigned total_degree(const std::vector<FormPower>& pattern);
std::string to_string(const std::vector<FormPower>& pattern, bool centered = false);

/// Evaluates joint moments of L and Q for i.i.d. free T_1..T_n with the given
/// marginal. Expansions and word moments are memoized across calls.
class JointMomentEngine {
 public:
  JointMomentEngine(QuadraticFormSpec spec, const MomentSequence& marginal);

  /// tau(X_1^{p_1} X_2^{p_2} ...) with X in {L, Q}; the empty pattern gives 1.
  Rational joint_moment(const std::vector<FormPower>& pattern);
  /// tau(prod_l (X_l^{p_l} - tau(X_l^{p_l}))).
  Rational centered_joint_moment(const std::vector<FormPower>& pattern);

  const QuadraticFormSpec& spec() const noexcept { return spec_; }

 private:
  QuadraticFormSpec spec_;
  MixedMomentCache words_;
  std::unordered_map<std::string, Rational> patterns_;
};

/// One-shot joint moment; throws when the marginal order is below the pattern degree.
Rational joint_moment(const QuadraticFormSpec& spec, const MomentSequence& marginal,
                      const std::vector<FormPower>& pattern);

struct DichotomyEntry {
  std::vector<FormPower> pattern;   // alternating, each letter centered
  unsigned degree = 0;
  Rational joint;                   // direct expansion over T words
  Rational free_prediction;         // L and Q treated as a free pair
  Rational deviation;               // joint - free_prediction
};

enum class Verdict { kConsistentWithFree, kNotFree };

struct DichotomyReport {
  std::size_t max_word_length = 0;
  std::vector<DichotomyEntry> entries;  // by increasing degree
  Rational max_abs_deviation;
  Verdict verdict = Verdict::kConsistentWithFree;
  std::optional<unsigned> first_nonzero_degree;
  std::string verdict_text() const;
};

inline constexpr std::size_t kDefaultMaxWordLength = 8;

/// All alternating patterns of centered L and Q powers with at least two
/// letters and total degree <= max_degree, ordered by degree.
std::vector<std::vector<FormPower>> alternating_patterns(std::size_t max_degree);

/// Compares every alternating centered (L, Q) moment up to the given degree
/// with the value it would take if L and Q were free. The prediction side
/// computes the moment sequences of L and Q, then evaluates the pattern with
/// the word engine treating them as free variables.
DichotomyReport freeness_dichotomy(const QuadraticFormSpec& spec, const MomentSequence& marginal,
                                   std::size_t max_word_length = kDefaultMaxWordLength);

}  // namespace freeconv
