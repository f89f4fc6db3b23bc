#pragma once

#include <cstddef>
#include <vector>

#include "freeconv/measures.hpp"
#include "freeconv/power_series.hpp"
#include "freeconv/sequences.hpp"

namespace freeconv {

/// Free additive convolution at moment level: free cumulants add.
MomentSequence boxplus_moments(const MomentSequence& m1, const MomentSequence& m2);

/// Taylor data of the subordination functions around 0, in the variable z.
struct SubordinationSeries {
  PowerSeries z1;          // Z_1(z) = sum_k z1[k] z^k
  PowerSeries z2;
  PowerSeries krein;       // K_{mu1 boxtimes mu2}(z) = K_{mu1}(Z_1(z))
  /// Signed coefficients t_1..t_p of Z_j(-x) = t_1 x + t_2 x^2 + ...
  std::vector<Rational> t1() const;
  std::vector<Rational> t2() const;
};

/// Solves Z_1 Z_2 = z K_1(Z_1), K_1(Z_1) = K_2(Z_2) in truncated series
/// arithmetic by iterating Z_j <- z K_k(Z_k) / Z_k from the seed
/// Z_j = r_1(mu_k) z; each pass fixes one more coefficient, p passes in all.
/// Needs orders >= p and nonzero first moments.
SubordinationSeries subordination_series(const MomentSequence& m1, const MomentSequence& m2, std::size_t p);

/// m_1..m_p of mu1 boxtimes mu2 from the series recursion. Exact.
MomentSequence boxtimes_moments(const MomentSequence& m1, const MomentSequence& m2, std::size_t p);

/// m_k = tau((T S)^k) for free T ~ m1, S ~ m2, evaluated by the word engine
/// on the alternating word of length 2k. Exact; independent of the series path.
MomentSequence boxtimes_word_oracle(const MomentSequence& m1, const MomentSequence& m2, std::size_t p);

/// m_k = tau((T + S)^k) summed over all 2^k words. Exact.
MomentSequence boxplus_word_oracle(const MomentSequence& m1, const MomentSequence& m2, std::size_t p);

struct SubordinationSolution {
  Complex z;
  Complex z1;
  Complex z2;
  Complex k_value;            // K_{mu1}(Z_1) = K_{mu1 boxtimes mu2}(z)
  double residual_product = 0;  // |Z_1 Z_2 - z K_{mu1}(Z_1)|
  double residual_krein = 0;    // |K_{mu1}(Z_1) - K_{mu2}(Z_2)|
  int iterations = 0;
  bool damped = false;
};

/// Fixed-point solve of the subordination equations at z in the upper half
/// plane or on the negative axis. Iterates Z_1 <- z K_2(Z_2)/Z_2,
/// Z_2 <- z K_1(Z_1)/Z_1 from Z_j = r_1(mu_k) z, switching to damping 1/2
/// once successive updates oscillate. Throws ConvergenceError after max_iter.
SubordinationSolution solve_subordination(const Measure& mu1, const Measure& mu2, Complex z, double tol = 1e-13,
                                          int max_iter = 500);

/// Least-squares fit of K(-x)/x = sum_{k>=1} (-1)^k r_k x^{k-1} on samples
/// (x_i, K(-x_i)); returns estimates of r_1..r_{degree+1}.
std::vector<double> fit_krein_expansion(const std::vector<double>& x, const std::vector<double>& k_values,
                                        std::size_t degree);

struct NumericMoments {
  std::vector<double> boolean_cumulants;
  std::vector<double> moments;
  double max_residual = 0;
  double radius = 0;
  std::size_t nodes = 0;
};

/// m_1..m_p of mu1 boxtimes mu2 from subordination: Taylor coefficients of
/// K_{mu1 boxtimes mu2} by the trapezoid rule on a circle |z| = radius inside
/// its disk of analyticity, every node solved with solve_subordination.
NumericMoments boxtimes_subordination_moments(const Measure& mu1, const Measure& mu2, std::size_t p,
                                              double tol = 1e-14, int max_iter = 500);

struct DiagnosticsReport {
  double alpha = 0;
  double integral_value = 0;   // -(1 - alpha) int_0^1 K(-x) x^{-1-alpha} dx
  double quadrature_error = 0;
  double lower_bound = 0;      // (m_alpha - int_{(0,1)} u^alpha dmu) / 2
  double upper_bound = 0;      // c(mu) m_alpha / alpha
  double c_mu = 0;             // 1 / int dmu(u) / (1 + u)
  double m_alpha = 0;
  bool finite = false;
  bool sandwich_holds() const noexcept { return lower_bound <= integral_value && integral_value <= upper_bound; }
};

inline constexpr double kQuadratureTolerance = 1e-8;

/// Fractional-moment diagnostic for mu on [0, inf) with mu({0}) < 1 and 0 < alpha < 1.
DiagnosticsReport fractional_diagnostics(const Measure& mu, double alpha);

/// m_alpha = int u^alpha dmu for 0 < alpha.
double fractional_moment(const Measure& mu, double alpha);

struct ClosureRow {
  double epsilon;
  double partial_integral;   // -(1 - gamma) int_eps^{x0} K(-x) x^{-1-gamma} dx
};

struct ClosureReport {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;          // alpha * beta
  double x0 = 0;
  std::vector<ClosureRow> rows;
  bool finite = false;
  double integral_value = 0; // same functional over (0, 1]
  double max_residual = 0;
};

/// Finiteness indication for m_{alpha beta}(mu1 boxtimes mu2): partial
/// integrals over (eps, x0] with K_{mu1 boxtimes mu2} from the subordination
/// solver, refined by eps -> eps/4 from 1e-6 until successive values agree to
/// 1e-6 (finite) or eps underflows (infinite indicated).
ClosureReport boxtimes_fractional_closure_check(const Measure& mu1, const Measure& mu2, double alpha, double beta);

inline constexpr double kClosureStartEpsilon = 1e-6;
inline constexpr double kClosureAgreement = 1e-6;

}  // namespace freeconv
