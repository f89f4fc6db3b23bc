#include "freeconv/word_engine.hpp"

#include <algorithm>
#include <cctype>

#include "freeconv/error.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

void enumerate_rec(std::size_t pos, NonCrossingPartition& part, std::vector<std::size_t>& open,
                   const std::function<void(const NonCrossingPartition&)>& visit) {
  if (pos == part.n) {
    visit(part);
    return;
  }
  // Open a new block.
  part.blocks.push_back({pos});
  open.push_back(part.blocks.size() - 1);
  enumerate_rec(pos + 1, part, open, visit);
  open.pop_back();
  part.blocks.pop_back();

  // Join an open block; every block opened after it is closed for good.
  for (std::size_t t = open.size(); t-- > 0;) {
    const std::size_t block = open[t];
    std::vector<std::size_t> closed(open.begin() + static_cast<std::ptrdiff_t>(t) + 1, open.end());
    open.resize(t + 1);
    part.blocks[block].push_back(pos);
    enumerate_rec(pos + 1, part, open, visit);
    part.blocks[block].pop_back();
    open.insert(open.end(), closed.begin(), closed.end());
  }
}

std::vector<std::vector<Rational>> cumulant_tables(const std::vector<MomentSequence>& marginals) {
  std::vector<std::vector<Rational>> out;
  out.reserve(marginals.size());
  for (const auto& m : marginals) out.push_back(free_from_moments(m).values());
  return out;
}

void require_orders(const std::vector<MomentSequence>& marginals, const Word& w) {
  if (w.size() == 0) return;
  if (w.variable_span() > marginals.size()) {
    throw DomainError("word references T" + std::to_string(w.variable_span()) + " but only " +
                      std::to_string(marginals.size()) + " marginals were given");
  }
  for (std::size_t v = 0; v < marginals.size(); ++v) {
    const std::size_t need = w.multiplicity(v);
    if (need > marginals[v].order()) {
      throw DomainError("marginal of T" + std::to_string(v + 1) + " has order " +
                        std::to_string(marginals[v].order()) + " but the word needs " + std::to_string(need));
    }
  }
}

// Interval recursion over the word. F(i, j) sums over monochromatic NC
// partitions of positions [i, j); G(a, j, s) sums over completions of a block
// that already holds s letters, the last at position a, inside (a, j).
class IntervalSum {
 public:
  IntervalSum(const std::vector<std::size_t>& colors, const std::vector<std::vector<Rational>>& kappa)
      : colors_(colors), kappa_(kappa), n_(colors.size()) {
    smax_ = 1;
    for (std::size_t v = 0; v < kappa.size(); ++v)
      smax_ = std::max<std::size_t>(smax_, std::count(colors.begin(), colors.end(), v));
    f_.resize((n_ + 1) * (n_ + 1));
    f_done_.assign(f_.size(), false);
    g_.resize(n_ * (n_ + 1) * (smax_ + 1));
    g_done_.assign(g_.size(), false);
  }

  const Rational& f(std::size_t i, std::size_t j) {
    const std::size_t idx = i * (n_ + 1) + j;
    if (!f_done_[idx]) {
      f_[idx] = (i == j) ? Rational(1) : g(i, j, 1);
      f_done_[idx] = true;
    }
    return f_[idx];
  }

 private:
  Rational g(std::size_t a, std::size_t j, std::size_t s) {
    const std::size_t idx = (a * (n_ + 1) + j) * (smax_ + 1) + s;
    if (g_done_[idx]) return g_[idx];
    const std::size_t color = colors_[a];
    Rational acc = 0;
    const Rational& closing = kappa_[color][s - 1];
    if (sgn(closing) != 0) acc = closing * f(a + 1, j);
    for (std::size_t b = a + 1; b < j; ++b) {
      if (colors_[b] != color) continue;
      const Rational& gap = f(a + 1, b);
      if (sgn(gap) == 0) continue;
      acc += gap * g(b, j, s + 1);
    }
    g_[idx] = acc;
    g_done_[idx] = true;
    return acc;
  }

  const std::vector<std::size_t>& colors_;
  const std::vector<std::vector<Rational>>& kappa_;
  std::size_t n_;
  std::size_t smax_;
  std::vector<Rational> f_;
  std::vector<bool> f_done_;
  std::vector<Rational> g_;
  std::vector<bool> g_done_;
};

Rational evaluate(const std::vector<std::size_t>& colors, const std::vector<std::vector<Rational>>& kappa) {
  if (colors.empty()) return Rational(1);
  IntervalSum sum(colors, kappa);
  return sum.f(0, colors.size());
}

std::string word_key(const std::vector<std::size_t>& letters) {
  std::string key;
  key.reserve(letters.size());
  for (auto l : letters) key.push_back(static_cast<char>('A' + l));
  return key;
}

}  // namespace

void enumerate_nc(std::size_t n, const std::function<void(const NonCrossingPartition&)>& visit) {
  if (n < 1 || n > kMaxEnumerationSize) {
    throw DomainError("enumerate_nc supports 1 <= n <= " + std::to_string(kMaxEnumerationSize));
  }
  NonCrossingPartition part;
  part.n = n;
  std::vector<std::size_t> open;
  enumerate_rec(0, part, open, visit);
}

bool is_non_crossing(const NonCrossingPartition& p) {
  std::vector<std::size_t> owner(p.n, p.n);
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    for (auto e : p.blocks[b]) {
      if (e >= p.n || owner[e] != p.n) return false;
      owner[e] = b;
    }
  if (std::find(owner.begin(), owner.end(), p.n) != owner.end()) return false;
  for (std::size_t a = 0; a < p.n; ++a)
    for (std::size_t b = a + 1; b < p.n; ++b)
      for (std::size_t c = b + 1; c < p.n; ++c)
        for (std::size_t d = c + 1; d < p.n; ++d)
          if (owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b]) return false;
  return true;
}

Word::Word(std::vector<std::size_t> letters) : letters_(std::move(letters)) {}

Word Word::parse(std::string_view text) {
  std::vector<std::size_t> letters;
  std::size_t pos = 0;
  auto is_digit = [&](std::size_t i) { return i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); };
  auto read_number = [&](const char* what) {
    const std::size_t begin = pos;
    while (is_digit(pos)) ++pos;
    if (pos == begin || pos - begin > 6) {
      throw ParseError("expected " + std::string(what) + " at offset " + std::to_string(begin) + " in '" +
                       std::string(text) + "'");
    }
    return static_cast<std::size_t>(std::stoul(std::string(text.substr(begin, pos - begin))));
  };
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    if (text[pos] != 'T' && text[pos] != 't') {
      throw ParseError("bad word letter '" + std::string(1, text[pos]) + "' in '" + std::string(text) +
                       "', expected T<k> or T<k>^<e>");
    }
    ++pos;
    const std::size_t index = read_number("a variable index");
    std::size_t exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      exponent = read_number("an exponent");
    }
    if (index == 0 || exponent == 0) throw ParseError("variable indices and exponents start at 1 in '" + std::string(text) + "'");
    letters.insert(letters.end(), exponent, index - 1);
  }
  if (letters.empty()) throw ParseError("empty word");
  return Word(std::move(letters));
}

Word Word::from_powers(const std::vector<std::pair<std::size_t, unsigned>>& powers) {
  std::vector<std::size_t> letters;
  for (const auto& [v, e] : powers) letters.insert(letters.end(), e, v);
  return Word(std::move(letters));
}

std::size_t Word::variable_span() const {
  if (letters_.empty()) return 0;
  return *std::max_element(letters_.begin(), letters_.end()) + 1;
}

std::size_t Word::multiplicity(std::size_t variable) const {
  return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), variable));
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size();) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += ' ';
    out += "T" + std::to_string(letters_[i] + 1);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

Rational mixed_moment(const std::vector<MomentSequence>& marginals, const Word& w) {
  require_orders(marginals, w);
  // Only the cumulants a word can reach are needed.
  std::vector<MomentSequence> trimmed;
  trimmed.reserve(marginals.size());
  for (std::size_t v = 0; v < marginals.size(); ++v)
    trimmed.push_back(marginals[v].truncated(std::max<std::size_t>(1, w.multiplicity(v))));
  return evaluate(w.letters(), cumulant_tables(trimmed));
}

Rational mixed_moment_enumerated(const std::vector<MomentSequence>& marginals, const Word& w) {
  require_orders(marginals, w);
  if (w.size() == 0) return Rational(1);
  std::vector<MomentSequence> trimmed;
  for (std::size_t v = 0; v < marginals.size(); ++v)
    trimmed.push_back(marginals[v].truncated(std::max<std::size_t>(1, w.multiplicity(v))));
  const auto kappa = cumulant_tables(trimmed);
  const auto& letters = w.letters();
  Rational total = 0;
  enumerate_nc(w.size(), [&](const NonCrossingPartition& p) {
    Rational term = 1;
    for (const auto& block : p.blocks) {
      const std::size_t color = letters[block.front()];
      for (auto e : block)
        if (letters[e] != color) return;
      term *= kappa[color][block.size() - 1];
      if (sgn(term) == 0) return;
    }
    total += term;
  });
  return total;
}

MixedMomentCache::MixedMomentCache(std::vector<MomentSequence> marginals)
    : marginals_(std::move(marginals)), cumulants_(cumulant_tables(marginals_)) {}

const Rational& MixedMomentCache::operator()(const Word& w) {
  const std::string key = word_key(w.letters());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  require_orders(marginals_, w);
  return cache_.emplace(key, evaluate(w.letters(), cumulants_)).first->second;
}

Rational centered_product_moment(MixedMomentCache& cache, const std::vector<CenteredLetter>& letters) {
  const std::size_t n = letters.size();
  if (n > 20) throw DomainError("centered product too long to expand");
  std::vector<Rational> centers(n);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& letter = letters[l];
    if (letter.variable >= cache.marginals().size()) throw DomainError("centered letter references an unknown variable");
    if (letter.exponent == 0) throw DomainError("centered letters need exponent >= 1");
    centers[l] = cache.marginals()[letter.variable].at(letter.exponent);
  }
  Rational total = 0;
  std::vector<std::size_t> flat;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Rational coeff = 1;
    flat.clear();
    for (std::size_t l = 0; l < n; ++l) {
      if (mask & (std::size_t{1} << l)) {
        flat.insert(flat.end(), letters[l].exponent, letters[l].variable);
      } else {
        coeff *= -centers[l];
        if (sgn(coeff) == 0) break;
      }
    }
    if (sgn(coeff) == 0) continue;
    total += coeff * cache(Word(flat));
  }
  return total;
}

AlternatingCheckReport alternating_centered_check(const std::vector<MomentSequence>& marginals, std::size_t max_len,
                                                  const ExponentPolicy& policy) {
  if (marginals.empty()) throw DomainError("alternating check needs at least one marginal");
  if (policy.exponents.empty()) throw DomainError("exponent policy needs at least one exponent");
  MixedMomentCache cache(marginals);
  AlternatingCheckReport report;
  report.max_len = max_len;
  const std::size_t vars = marginals.size();
  const std::size_t choices = policy.exponents.size();

  auto check = [&](const std::vector<std::size_t>& indices, const std::vector<unsigned>& exps) {
    std::vector<CenteredLetter> letters(indices.size());
    for (std::size_t l = 0; l < indices.size(); ++l) letters[l] = {indices[l], exps[l]};
    Rational value = centered_product_moment(cache, letters);
    if (sgn(value) != 0) ++report.nonzero_count;
    report.entries.push_back({std::move(letters), std::move(value)});
  };

  auto run_exponents = [&](const std::vector<std::size_t>& indices) {
    const std::size_t n = indices.size();
    std::vector<unsigned> exps(n);
    if (policy.exhaustive) {
      std::vector<std::size_t> digit(n, 0);
      while (true) {
        for (std::size_t l = 0; l < n; ++l) exps[l] = policy.exponents[digit[l]];
        check(indices, exps);
        std::size_t l = 0;
        while (l < n && ++digit[l] == choices) digit[l++] = 0;
        if (l == n) break;
      }
      return;
    }
    for (std::size_t c = 0; c < choices; ++c) {
      std::fill(exps.begin(), exps.end(), policy.exponents[c]);
      check(indices, exps);
    }
    if (choices < 2) return;
    for (std::size_t shift = 0; shift < choices; ++shift) {
      for (std::size_t l = 0; l < n; ++l) exps[l] = policy.exponents[(l + shift) % choices];
      if (n == 1) continue;  // a single letter repeats a constant assignment
      check(indices, exps);
    }
  };

  std::vector<std::size_t> indices;
  std::function<void()> grow = [&]() {
    if (!indices.empty()) run_exponents(indices);
    if (indices.size() == max_len) return;
    for (std::size_t v = 0; v < vars; ++v) {
      if (!indices.empty() && indices.back() == v) continue;
      indices.push_back(v);
      grow();
      indices.pop_back();
    }
  };
  grow();
  return report;
}

std::string to_string(const std::vector<CenteredLetter>& letters) {
  std::string out;
  for (const auto& l : letters) {
    if (!out.empty()) out += ' ';
    out += "(T" + std::to_string(l.variable + 1);
    if (l.exponent > 1) out += "^" + std::to_string(l.exponent);
    out += ")c";
  }
  return out;
}

}  // namespace freeconv
