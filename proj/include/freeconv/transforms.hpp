#pragma once

#include <cstddef>
#include <vector>

#include "freeconv/measures.hpp"
#include "freeconv/power_series.hpp"
#include "freeconv/sequences.hpp"

namespace freeconv {

/// Coefficients of K = M / (1 + M), M(z) = sum_k m_k z^k.
BooleanCumulants boolean_from_moments(const MomentSequence& m);
/// Inverse map, M = K / (1 - K).
MomentSequence moments_from_boolean(const BooleanCumulants& r);

/// kappa_n from m_n = sum over non-crossing partitions of prod kappa_{|V|}.
FreeCumulants free_from_moments(const MomentSequence& m);
MomentSequence moments_from_free(const FreeCumulants& kappa);

/// M(z) = 1 + m_1 z + ... + m_D z^D.
PowerSeries moment_series(const MomentSequence& m);
/// K(z) = r_1 z + ... + r_D z^D.
PowerSeries krein_series(const BooleanCumulants& r);

struct KreinExpansionRow {
  double x;
  double remainder;  // E(x) = K(-x) - sum_{k<=p} (-1)^k r_k x^k
  double ratio;      // |E(x)| / x^p
};

struct KreinExpansionReport {
  unsigned p = 0;
  std::size_t burn_in = 0;
  std::vector<KreinExpansionRow> rows;
  bool exact = false;       // rows computed in exact arithmetic
  bool monotone = false;    // ratios non-increasing after the burn-in
  double final_ratio = 0;
  bool decays = false;      // monotone and final_ratio below the decay threshold
};

inline constexpr std::size_t kKreinBurnIn = 4;
inline constexpr double kKreinDecayThreshold = 1e-3;

/// Tabulates the remainder of the order-p Taylor expansion of K(-x) on the
/// grid x = 2^-i. `m` must be the moment sequence of `mu` (order >= p); an
/// inconsistent pair shows up as a table that fails to decay.
KreinExpansionReport krein_expansion_check(const Measure& mu, const MomentSequence& m, unsigned p,
                                           std::size_t grid_points = 30);

}  // namespace freeconv
