#include "freeconv/sequences.hpp"

namespace freeconv {

MomentSequence MomentSequence::truncated(std::size_t k) const {
  if (k == 0 || k > moments_.size()) throw DomainError("cannot truncate moment sequence to order " + std::to_string(k));
  return MomentSequence({moments_.begin(), moments_.begin() + static_cast<std::ptrdiff_t>(k)}, positive_measure_);
}

bool hankel_psd(const MomentSequence& m, unsigned shift) {
  if (m.order() < shift) return true;
  const std::size_t size = (m.order() - shift) / 2 + 1;
  std::vector<std::vector<Rational>> h(size, std::vector<Rational>(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) h[i][j] = m.at(i + j + shift);

  // Symmetric elimination. A zero pivot of a PSD matrix forces its whole row to vanish.
  for (std::size_t k = 0; k < size; ++k) {
    const int s = sgn(h[k][k]);
    if (s < 0) return false;
    if (s == 0) {
      for (std::size_t j = k + 1; j < size; ++j)
        if (sgn(h[k][j]) != 0) return false;
      continue;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      if (sgn(h[i][k]) == 0) continue;
      const Rational factor = h[i][k] / h[k][k];
      for (std::size_t j = k + 1; j < size; ++j) h[i][j] -= factor * h[k][j];
    }
  }
  return true;
}

}  // namespace freeconv
