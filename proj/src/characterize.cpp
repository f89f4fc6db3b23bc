#include "freeconv/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

using Polynomial = std::unordered_map<std::string, Rational>;  // word key -> coefficient

std::string pattern_key(const std::vector<FormPower>& pattern) {
  std::string key;
  for (const auto& f : pattern) {
    key += f.form == Form::kLinear ? 'L' : 'Q';
    key += std::to_string(f.exponent);
    key += ' ';
  }
  return key;
}

Polynomial multiply(const Polynomial& poly, const std::vector<std::pair<std::string, Rational>>& factor) {
  Polynomial out;
  out.reserve(poly.size() * factor.size());
  for (const auto& [word, c] : poly)
    for (const auto& [letters, f] : factor) {
      auto& slot = out[word + letters];
      slot += c * f;
    }
  for (auto it = out.begin(); it != out.end();) {
    if (sgn(it->second) == 0) it = out.erase(it);
    else ++it;
  }
  return out;
}

Word word_from_key(const std::string& key) {
  std::vector<std::size_t> letters;
  letters.reserve(key.size());
  for (char c : key) letters.push_back(static_cast<std::size_t>(c));
  return Word(std::move(letters));
}

// Exact sign-aware check that |d_top| W^m > sum |d_w| w^m holds at m.
bool dominates(const std::map<Rational, Rational>& d, const Rational& top, unsigned m) {
  Rational rest = 0;
  for (const auto& [w, c] : d)
    if (w != top) rest += abs(c) * power(w, m);
  return abs(d.at(top)) * power(top, m) > rest;
}

}  // namespace

QuadraticFormSpec::QuadraticFormSpec(std::vector<std::vector<Rational>> a_in, std::vector<Rational> b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (b.size() < 2) throw DomainError("quadratic form spec needs n >= 2");
  if (a.size() != b.size()) throw DomainError("matrix A must be n x n with n = len(b)");
  for (const auto& row : a)
    if (row.size() != b.size()) throw DomainError("matrix A must be square");
}

QuadraticFormSpec preset_sample_mean_variance(std::size_t n) {
  if (n < 2) throw DomainError("sample mean/variance preset needs n >= 2");
  const Rational inv_n(1, static_cast<unsigned long>(n));
  const Rational inv_n2 = inv_n * inv_n;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(-inv_n2)));
  for (std::size_t j = 0; j < n; ++j) a[j][j] = inv_n - inv_n2;
  return QuadraticFormSpec(std::move(a), std::vector<Rational>(n, inv_n));
}

std::string ValidityReport::failing_condition() const {
  if (!symmetric) return "A must be symmetric";
  if (!annihilates) return "A b = 0 fails";
  if (!power_sums_all) {
    return "sum_j b_j^m a_jj vanishes at m = " +
           (first_vanishing_power ? std::to_string(*first_vanishing_power) : std::string("?"));
  }
  if (!diagonal_coupling) return "b_j a_jj = 0 for every j";
  return {};
}

ValidityReport validate_spec(const QuadraticFormSpec& spec) {
  const std::size_t n = spec.n();
  ValidityReport report;

  report.symmetric = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (spec.a[i][j] != spec.a[j][i]) report.symmetric = false;

  report.annihilates = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += spec.a[i][j] * spec.b[j];
    if (sgn(acc) != 0) report.annihilates = false;
  }

  for (std::size_t j = 0; j < n; ++j)
    if (sgn(spec.b[j]) != 0 && sgn(spec.a[j][j]) != 0) report.diagonal_coupling = true;

  // sum_j a_jj b_j^m = sum_v c_v v^m over distinct nonzero values v of b.
  std::map<Rational, Rational> grouped;
  for (std::size_t j = 0; j < n; ++j)
    if (sgn(spec.b[j]) != 0) grouped[spec.b[j]] += spec.a[j][j];
  auto power_sum = [&](unsigned m) {
    Rational acc = 0;
    for (const auto& [v, c] : grouped) acc += c * power(v, m);
    return acc;
  };

  report.power_sums_first_n = true;
  for (unsigned m = 1; m <= n; ++m) {
    if (sgn(power_sum(m)) == 0) {
      report.power_sums_first_n = false;
      if (!report.first_vanishing_power) report.first_vanishing_power = m;
    }
  }

  // For m of fixed parity the sum is sum_w d_w w^m over w = |v| with
  // d_w = c_w +- c_{-w}. Either all d_w vanish (the whole parity class fails)
  // or the largest w with d_w != 0 eventually dominates.
  unsigned horizon = static_cast<unsigned>(n);
  std::optional<unsigned> parity_failure;
  for (unsigned parity = 0; parity < 2; ++parity) {
    std::map<Rational, Rational> d;
    for (const auto& [v, c] : grouped) {
      const bool flip = sgn(v) < 0 && parity == 1;
      d[abs(v)] += flip ? Rational(-c) : c;
    }
    for (auto it = d.begin(); it != d.end();) {
      if (sgn(it->second) == 0) it = d.erase(it);
      else ++it;
    }
    const unsigned smallest = parity == 0 ? 2 : 1;
    if (d.empty()) {
      parity_failure = parity_failure ? std::min(*parity_failure, smallest) : smallest;
      continue;
    }
    const Rational top = d.rbegin()->first;
    unsigned m = std::max<unsigned>(horizon, 1);
    while (!dominates(d, top, m)) {
      if (m > 1u << 16) throw DomainError("power-sum condition could not be certified (values too close)");
      m *= 2;
    }
    horizon = std::max(horizon, m);
  }
  report.certified_through = horizon;

  report.power_sums_all = !parity_failure.has_value();
  if (parity_failure) report.first_vanishing_power = std::min(report.first_vanishing_power.value_or(*parity_failure), *parity_failure);
  for (unsigned m = 1; m <= horizon && report.power_sums_all; ++m) {
    if (sgn(power_sum(m)) == 0) {
      report.power_sums_all = false;
      report.first_vanishing_power = m;
    }
  }
  if (!report.power_sums_first_n) report.power_sums_all = false;
  return report;
}

unsigned total_degree(const std::vector<FormPower>& pattern) {
  unsigned d = 0;
  for (const auto& f : pattern) d += f.exponent * (f.form == Form::kLinear ? 1u : 2u);
  return d;
}

std::string to_string(const std::vector<FormPower>& pattern, bool centered) {
  std::string out;
  for (const auto& f : pattern) {
    if (!out.empty()) out += ' ';
    std::string letter = f.form == Form::kLinear ? "L" : "Q";
    if (f.exponent > 1) letter += "^" + std::to_string(f.exponent);
    out += centered ? "(" + letter + ")c" : letter;
  }
  return out;
}

JointMomentEngine::JointMomentEngine(QuadraticFormSpec spec, const MomentSequence& marginal)
    : spec_(std::move(spec)), words_(std::vector<MomentSequence>(spec_.n(), marginal)) {}

Rational JointMomentEngine::joint_moment(const std::vector<FormPower>& pattern) {
  const std::string key = pattern_key(pattern);
  if (auto it = patterns_.find(key); it != patterns_.end()) return it->second;

  const unsigned degree = total_degree(pattern);
  if (degree > words_.marginals().front().order()) {
    throw DomainError("marginal order " + std::to_string(words_.marginals().front().order()) +
                      " is below the pattern degree " + std::to_string(degree));
  }
  const std::size_t n = spec_.n();
  std::vector<std::pair<std::string, Rational>> linear;
  for (std::size_t j = 0; j < n; ++j)
    if (sgn(spec_.b[j]) != 0) linear.emplace_back(std::string(1, static_cast<char>(j)), spec_.b[j]);
  std::vector<std::pair<std::string, Rational>> quadratic;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (sgn(spec_.a[j][k]) != 0)
        quadratic.emplace_back(std::string{static_cast<char>(j), static_cast<char>(k)}, spec_.a[j][k]);

  Polynomial poly{{std::string(), Rational(1)}};
  for (const auto& f : pattern)
    for (unsigned e = 0; e < f.exponent; ++e) poly = multiply(poly, f.form == Form::kLinear ? linear : quadratic);

  Rational total = 0;
  for (const auto& [word, c] : poly) total += c * (word.empty() ? Rational(1) : words_(word_from_key(word)));
  return patterns_.emplace(key, total).first->second;
}

Rational JointMomentEngine::centered_joint_moment(const std::vector<FormPower>& pattern) {
  const std::size_t s = pattern.size();
  std::vector<Rational> centers(s);
  for (std::size_t l = 0; l < s; ++l) centers[l] = joint_moment({pattern[l]});
  Rational total = 0;
  std::vector<FormPower> kept;
  for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
    Rational coeff = 1;
    kept.clear();
    for (std::size_t l = 0; l < s; ++l) {
      if (mask & (std::size_t{1} << l)) kept.push_back(pattern[l]);
      else coeff *= -centers[l];
    }
    if (sgn(coeff) == 0) continue;
    total += coeff * joint_moment(kept);
  }
  return total;
}

Rational joint_moment(const QuadraticFormSpec& spec, const MomentSequence& marginal,
                      const std::vector<FormPower>& pattern) {
  if (pattern.empty()) throw DomainError("joint moment pattern is empty");
  JointMomentEngine engine(spec, marginal);
  return engine.joint_moment(pattern);
}

std::string DichotomyReport::verdict_text() const {
  if (verdict == Verdict::kConsistentWithFree) return "consistent-with-free";
  return "not-free-at-order-" + std::to_string(first_nonzero_degree.value_or(0));
}

std::vector<std::vector<FormPower>> alternating_patterns(std::size_t max_degree) {
  std::vector<std::vector<FormPower>> out;
  std::vector<FormPower> current;
  std::function<void(unsigned)> grow = [&](unsigned degree) {
    if (current.size() >= 2) out.push_back(current);
    for (Form form : {Form::kLinear, Form::kQuadratic}) {
      if (!current.empty() && current.back().form == form) continue;
      const unsigned unit = form == Form::kLinear ? 1 : 2;
      for (unsigned e = 1; degree + unit * e <= max_degree; ++e) {
        current.push_back({form, e});
        grow(degree + unit * e);
        current.pop_back();
      }
    }
  };
  grow(0);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return total_degree(x) < total_degree(y); });
  return out;
}

DichotomyReport freeness_dichotomy(const QuadraticFormSpec& spec, const MomentSequence& marginal,
                                   std::size_t max_word_length) {
  const ValidityReport validity = validate_spec(spec);
  if (!validity.passes()) throw DomainError("quadratic form spec rejected: " + validity.failing_condition());
  if (sgn(marginal[1]) != 0) throw DomainError("the marginal must be centered (m_1 = 0)");
  if (max_word_length < 3) throw DomainError("max word length must be >= 3");
  if (marginal.order() < max_word_length) {
    throw DomainError("marginal order " + std::to_string(marginal.order()) + " is below the max word length " +
                      std::to_string(max_word_length));
  }

  JointMomentEngine joint(spec, marginal);
  const std::size_t l_order = max_word_length;
  const std::size_t q_order = max_word_length / 2;
  std::vector<Rational> l_moments(l_order), q_moments(q_order);
  for (unsigned k = 1; k <= l_order; ++k) l_moments[k - 1] = joint.joint_moment({{Form::kLinear, k}});
  for (unsigned k = 1; k <= q_order; ++k) q_moments[k - 1] = joint.joint_moment({{Form::kQuadratic, k}});
  MixedMomentCache free_pair({MomentSequence(l_moments), MomentSequence(q_moments)});

  DichotomyReport report;
  report.max_word_length = max_word_length;
  report.max_abs_deviation = 0;
  for (auto& pattern : alternating_patterns(max_word_length)) {
    DichotomyEntry entry;
    entry.degree = total_degree(pattern);
    entry.joint = joint.centered_joint_moment(pattern);
    std::vector<CenteredLetter> letters;
    for (const auto& f : pattern) letters.push_back({f.form == Form::kLinear ? 0u : 1u, f.exponent});
    entry.free_prediction = centered_product_moment(free_pair, letters);
    entry.deviation = entry.joint - entry.free_prediction;
    entry.pattern = std::move(pattern);
    if (sgn(entry.deviation) != 0) {
      if (!report.first_nonzero_degree) report.first_nonzero_degree = entry.degree;
      if (abs(entry.deviation) > report.max_abs_deviation) report.max_abs_deviation = abs(entry.deviation);
    }
    report.entries.push_back(std::move(entry));
  }
  report.verdict = report.first_nonzero_degree ? Verdict::kNotFree : Verdict::kConsistentWithFree;
  return report;
}

}  // namespace freeconv
