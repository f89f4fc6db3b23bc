#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "freeconv/rational.hpp"
#include "freeconv/sequences.hpp"

namespace freeconv {

/// Partition of the positions 0..n-1 whose blocks do not cross. Blocks are
/// sorted ascending and ordered by their smallest element.
struct NonCrossingPartition {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> blocks;
};

inline constexpr std::size_t kMaxEnumerationSize = 14;

/// Calls `visit` once for every non-crossing partition of n points
/// (Catalan(n) calls). Requires 1 <= n <= kMaxEnumerationSize.
void enumerate_nc(std::size_t n, const std::function<void(const NonCrossingPartition&)>& visit);

bool is_non_crossing(const NonCrossingPartition& p);

/// Product T_{j_1} T_{j_2} ... of exponent-1 letters; variable indices are 0-based.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::size_t> letters);

  /// Parses "T1^2 T2 T1 T3^3" (1-based variable names, caret exponents).
  static Word parse(std::string_view text);
  /// T_{k_1}^{n_1} ... T_{k_s}^{n_s} with 0-based indices.
  static Word from_powers(const std::vector<std::pair<std::size_t, unsigned>>& powers);

  const std::vector<std::size_t>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  /// Number of distinct variables referenced, i.e. 1 + max index.
  std::size_t variable_span() const;
  std::size_t multiplicity(std::size_t variable) const;

  /// Canonical text form with runs folded into exponents.
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<std::size_t> letters_;
};

/// tau(w) for mutually free variables with the given marginals: the sum over
/// non-crossing partitions with variable-monochromatic blocks of the product
/// of the blocks' free cumulants. Evaluated by interval recursion over the
/// word, so no partition list is ever materialized.
Rational mixed_moment(const std::vector<MomentSequence>& marginals, const Word& w);

/// Same quantity by explicit enumeration of NC(|w|); |w| <= kMaxEnumerationSize.
Rational mixed_moment_enumerated(const std::vector<MomentSequence>& marginals, const Word& w);

/// Memoizing evaluator for repeated mixed moments over fixed marginals.
class MixedMomentCache {
 public:
  explicit MixedMomentCache(std::vector<MomentSequence> marginals);

  const Rational& operator()(const Word& w);
  const std::vector<MomentSequence>& marginals() const noexcept { return marginals_; }
  std::size_t size() const noexcept { return cache_.size(); }

 private:
  std::vector<MomentSequence> marginals_;
  std::vector<std::vector<Rational>> cumulants_;  // per variable, kappa_1..kappa_order
  std::unordered_map<std::string, Rational> cache_;
};

/// One letter of a centered alternating product: T_j^p - m_p(T_j).
struct CenteredLetter {
  std::size_t variable;
  unsigned exponent;
};

/// tau of prod_l (T_{j_l}^{p_l} - m_{p_l}(T_{j_l})) by expanding the product
/// into plain words and summing mixed moments.
Rational centered_product_moment(MixedMomentCache& cache, const std::vector<CenteredLetter>& letters);

struct AlternatingCheckEntry {
  std::vector<CenteredLetter> letters;
  Rational value;
};

struct AlternatingCheckReport {
  std::size_t max_len = 0;
  std::vector<AlternatingCheckEntry> entries;
  std::size_t nonzero_count = 0;
  bool all_zero() const noexcept { return nonzero_count == 0; }
};

/// Exponent assignments per index word: `exhaustive` uses every assignment
/// from `exponents`; otherwise each constant assignment plus each cyclic
/// rotation of the exponent list along the word.
struct ExponentPolicy {
  std::vector<unsigned> exponents{1};
  bool exhaustive = false;
};

/// Evaluates every alternating index word j_1 != j_2 != ... of length
/// 1..max_len over the marginals' variables, with centered-power letters.
/// Exact arithmetic, so "zero" means rational zero.
AlternatingCheckReport alternating_centered_check(const std::vector<MomentSequence>& marginals,
                                                  std::size_t max_len, const ExponentPolicy& policy = {});

std::string to_string(const std::vector<CenteredLetter>& letters);

}  // namespace freeconv
