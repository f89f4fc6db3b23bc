#pragma once

#include <cstddef>
#include <vector>

#include "freeconv/error.hpp"
#include "freeconv/rational.hpp"

namespace freeconv {

/// Moments m_1..m_D of a distribution, 1-based; m_0 == 1 is implicit.
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::vector<Rational> moments, bool positive_measure = false)
      : moments_(std::move(moments)), positive_measure_(positive_measure) {
    if (moments_.empty()) throw DomainError("moment sequence must have order >= 1");
  }

  std::size_t order() const noexcept { return moments_.size(); }

  /// m_k for 0 <= k <= order().
  Rational at(std::size_t k) const {
    if (k == 0) return Rational(1);
    if (k > moments_.size()) throw DomainError("moment index exceeds sequence order");
    return moments_[k - 1];
  }
  const Rational& operator[](std::size_t k) const { return moments_[k - 1]; }

  const std::vector<Rational>& values() const noexcept { return moments_; }

  /// True when the sequence was produced from an actual measure (see hankel_psd()).
  bool positive_measure() const noexcept { return positive_measure_; }

  /// First k moments.
  MomentSequence truncated(std::size_t k) const;

  friend bool operator==(const MomentSequence& a, const MomentSequence& b) { return a.moments_ == b.moments_; }

 private:
  std::vector<Rational> moments_;
  bool positive_measure_ = false;
};

/// 1-based coefficient vector c_1..c_D tagged by what the coefficients mean.
template <class Tag>
class CoefficientSequence {
 public:
  CoefficientSequence() = default;
  explicit CoefficientSequence(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("cumulant sequence must have order >= 1");
  }

  std::size_t order() const noexcept { return values_.size(); }
  const Rational& operator[](std::size_t k) const { return values_[k - 1]; }
  const std::vector<Rational>& values() const noexcept { return values_; }

  friend bool operator==(const CoefficientSequence& a, const CoefficientSequence& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Rational> values_;
};

struct BooleanTag {};
struct FreeTag {};

/// r_k: Taylor coefficients of K(z) = psi(z) / (1 + psi(z)).
using BooleanCumulants = CoefficientSequence<BooleanTag>;
/// kappa_k: non-crossing moment-cumulant coefficients.
using FreeCumulants = CoefficientSequence<FreeTag>;

/// Exact PSD test of the Hankel matrix [m_{i+j+shift}]_{i,j} over all indices
/// that fit into m_0..m_order.
bool hankel_psd(const MomentSequence& m, unsigned shift = 0);

}  // namespace freeconv
