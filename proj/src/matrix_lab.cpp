#include "freeconv/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "freeconv/error.hpp"
#include "freeconv/rational.hpp"

namespace freeconv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

Matrix gaussian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = normal(rng);
  return g;
}

Matrix sample_goe(std::mt19937_64& rng, std::size_t n) {
  const Matrix g = gaussian(rng, n);
  return (g + g.transpose()) / std::sqrt(2.0 * static_cast<double>(n));
}

Matrix sample_wishart(std::mt19937_64& rng, std::size_t n) {
  const Matrix g = gaussian(rng, n);
  return g * g.transpose() / static_cast<double>(n);
}

Matrix haar_orthogonal(std::mt19937_64& rng, std::size_t n) {
  const Matrix g = gaussian(rng, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Matrix sample_rotated_diagonal(std::mt19937_64& rng, std::size_t n, const AtomicMeasure& mu) {
  std::vector<double> weights, locations;
  for (const auto& atom : mu.atoms()) {
    weights.push_back(atom.weight.get_d());
    locations.push_back(atom.location.get_d());
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = locations[pick(rng)];
  const Matrix o = haar_orthogonal(rng, n);
  return o * d.asDiagonal() * o.transpose();
}

// Powers of each family member, built on demand and shared across words.
class PowerTable {
 public:
  explicit PowerTable(const std::vector<Matrix>& family) : family_(family) {}

  const Matrix& get(std::size_t variable, unsigned exponent) {
    auto& slot = table_[{variable, exponent}];
    if (slot.size() == 0) slot = exponent == 1 ? family_[variable] : get(variable, exponent - 1) * family_[variable];
    return slot;
  }

  double trace(const Word& w) {
    std::vector<std::pair<std::size_t, unsigned>> runs;
    for (std::size_t v : w.letters()) {
      if (v >= family_.size()) throw DomainError("word uses T" + std::to_string(v + 1) + " but the family has " +
                                                 std::to_string(family_.size()) + " matrices");
      if (!runs.empty() && runs.back().first == v) ++runs.back().second;
      else runs.emplace_back(v, 1u);
    }
    // tr is cyclic, so a run wrapping around the end folds into the first one.
    if (runs.size() > 1 && runs.front().first == runs.back().first) {
      runs.front().second += runs.back().second;
      runs.pop_back();
    }
    const double n = static_cast<double>(family_.front().rows());
    if (runs.empty()) return 1.0;
    if (runs.size() == 1) return get(runs[0].first, runs[0].second).trace() / n;
    Matrix acc = get(runs[0].first, runs[0].second);
    for (std::size_t i = 1; i + 1 < runs.size(); ++i) acc = acc * get(runs[i].first, runs[i].second);
    const Matrix& last = get(runs.back().first, runs.back().second);
    return (acc.array() * last.transpose().array()).sum() / n;
  }

 private:
  const std::vector<Matrix>& family_;
  std::map<std::pair<std::size_t, unsigned>, Matrix> table_;
};

}  // namespace

EnsembleKind parse_ensemble(const std::string& name) {
  if (name == "goe") return EnsembleKind::kGoe;
  if (name == "rotated-diagonal" || name == "diagonal") return EnsembleKind::kRotatedDiagonal;
  if (name == "wishart") return EnsembleKind::kWishart;
  throw ParseError("unknown ensemble '" + name + "' (expected goe, rotated-diagonal or wishart)");
}

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kGoe: return "goe";
    case EnsembleKind::kRotatedDiagonal: return "rotated-diagonal";
    case EnsembleKind::kWishart: return "wishart";
  }
  return "?";
}

void validate_ensemble(const MatrixEnsembleSpec& spec) {
  if (spec.dimension == 0) throw DomainError("matrix dimension must be positive");
  if (spec.count == 0) throw DomainError("family must contain at least one matrix");
  const std::size_t n = spec.dimension;
  const std::size_t cap = kMaxFamilyBytes / sizeof(double);
  // Count + workspace of a few matrices per member.
  if (n > cap / n || n * n > cap / (spec.count + 4)) {
    throw DomainError("a family of " + std::to_string(spec.count) + " matrices of dimension " + std::to_string(n) +
                      " exceeds the memory limit");
  }
  if (spec.kind == EnsembleKind::kRotatedDiagonal && (!spec.diagonal || spec.diagonal->as_atomic() == nullptr)) {
    throw DomainError("rotated-diagonal ensemble needs an atomic measure");
  }
}

std::vector<Matrix> sample_family(const MatrixEnsembleSpec& spec, std::uint64_t trial) {
  validate_ensemble(spec);
  auto rng = trial_engine(spec.seed, trial);
  std::vector<Matrix> family;
  family.reserve(spec.count);
  for (std::size_t j = 0; j < spec.count; ++j) {
    switch (spec.kind) {
      case EnsembleKind::kGoe: family.push_back(sample_goe(rng, spec.dimension)); break;
      case EnsembleKind::kWishart: family.push_back(sample_wishart(rng, spec.dimension)); break;
      case EnsembleKind::kRotatedDiagonal:
        family.push_back(sample_rotated_diagonal(rng, spec.dimension, *spec.diagonal->as_atomic()));
        break;
    }
  }
  return family;
}

MomentSequence ensemble_marginal(const MatrixEnsembleSpec& spec, std::size_t order) {
  switch (spec.kind) {
    case EnsembleKind::kGoe: return moments(Measure(SemicircleMeasure(0.0, 2.0)), order);
    case EnsembleKind::kWishart: {
      std::vector<Rational> m(order);
      for (std::size_t k = 1; k <= order; ++k) m[k - 1] = catalan(static_cast<unsigned>(k));
      return MomentSequence(std::move(m), true);
    }
    case EnsembleKind::kRotatedDiagonal:
      if (!spec.diagonal) throw DomainError("rotated-diagonal ensemble needs a measure");
      return moments(*spec.diagonal, order);
  }
  throw DomainError("unknown ensemble");
}

double normalized_trace(const std::vector<Matrix>& family, const Word& w) {
  if (family.empty()) throw DomainError("empty matrix family");
  PowerTable table(family);
  return table.trace(w);
}

std::vector<TraceEstimate> estimate_word_traces(const MatrixEnsembleSpec& spec, const std::vector<Word>& words,
                                                std::size_t trials, std::size_t threads) {
  validate_ensemble(spec);
  if (trials < 2) throw DomainError("need at least two trials for a standard error");
  for (const auto& w : words)
    if (w.variable_span() > spec.count) {
      throw DomainError("word " + w.to_string() + " needs " + std::to_string(w.variable_span()) + " matrices");
    }

  std::vector<std::vector<double>> samples(trials, std::vector<double>(words.size()));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto family = sample_family(spec, t);
      PowerTable table(family);
      for (std::size_t i = 0; i < words.size(); ++i) samples[t][i] = table.trace(words[i]);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, trials);
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        try {
          run(trials * k / workers, trials * (k + 1) / workers);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<TraceEstimate> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    double mean = 0.0;
    for (std::size_t t = 0; t < trials; ++t) mean += samples[t][i];
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (std::size_t t = 0; t < trials; ++t) var += (samples[t][i] - mean) * (samples[t][i] - mean);
    var /= static_cast<double>(trials - 1);
    out.push_back({words[i], mean, std::sqrt(var / static_cast<double>(trials)), trials});
  }
  return out;
}

TraceEstimate estimate_word_trace(const MatrixEnsembleSpec& spec, const Word& w, std::size_t trials,
                                  std::size_t threads) {
  return estimate_word_traces(spec, {w}, trials, threads).front();
}

std::vector<double> jacobi_eigenvalues(const Matrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw DomainError("eigenvalues need a square matrix");
  Matrix a = symmetric;
  const Eigen::Index n = a.rows();
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale) {
      std::vector<double> ev(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  throw ConvergenceError("Jacobi eigenvalue iteration did not converge in 100 sweeps");
}

std::vector<double> singular_values(const Matrix& x) {
  auto ev = jacobi_eigenvalues(x.transpose() * x);
  for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
  return ev;
}

double nc_lp_norm(const Matrix& x, double p) {
  if (!(p > 0.0)) throw DomainError("norm exponent must be positive");
  const auto sv = singular_values(x);
  if (std::isinf(p)) return sv.empty() ? 0.0 : sv.back();
  double acc = 0.0;
  for (double s : sv) acc += std::pow(s, p);
  return std::pow(acc / static_cast<double>(x.rows()), 1.0 / p);
}

InequalityCheck compare(double lhs, double rhs) {
  return {lhs, rhs, lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs))};
}

InequalityCheck check_ideal(const Matrix& a, const Matrix& x, const Matrix& b, double p) {
  const double inf = std::numeric_limits<double>::infinity();
  return compare(nc_lp_norm(a * x * b, p), nc_lp_norm(a, inf) * nc_lp_norm(x, p) * nc_lp_norm(b, inf));
}

namespace {

void require_conjugate(const std::vector<Matrix>& xs, const std::vector<double>& ps) {
  if (xs.empty() || xs.size() != ps.size()) throw DomainError("Hoelder needs one exponent per factor");
  double inv = 0.0;
  for (double p : ps) {
    if (!(p >= 1.0)) throw DomainError("Hoelder exponents must be >= 1");
    inv += 1.0 / p;
  }
  if (std::abs(inv - 1.0) > 1e-12) throw DomainError("Hoelder exponents must satisfy sum 1/p_j = 1");
}

Matrix product(const std::vector<Matrix>& xs) {
  Matrix acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = acc * xs[i];
  return acc;
}

double norm_product(const std::vector<Matrix>& xs, const std::vector<double>& ps) {
  double rhs = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) rhs *= nc_lp_norm(xs[i], ps[i]);
  return rhs;
}

}  // namespace

InequalityCheck check_trace_holder(const std::vector<Matrix>& xs, const std::vector<double>& ps) {
  require_conjugate(xs, ps);
  const Matrix prod = product(xs);
  return compare(std::abs(prod.trace()) / static_cast<double>(prod.rows()), norm_product(xs, ps));
}

InequalityCheck check_l1_holder(const std::vector<Matrix>& xs, const std::vector<double>& ps) {
  require_conjugate(xs, ps);
  return compare(nc_lp_norm(product(xs), 1.0), norm_product(xs, ps));
}

InequalityCheck check_minkowski(const Matrix& x, const Matrix& y, double p) {
  if (!(p >= 1.0)) throw DomainError("Minkowski needs p >= 1");
  return compare(nc_lp_norm(x + y, p), nc_lp_norm(x, p) + nc_lp_norm(y, p));
}

InequalityCheck check_power_chain(const std::vector<Matrix>& ts, const std::vector<unsigned>& n) {
  const std::size_t s = ts.size();
  if (s < 2 || n.size() != s) throw DomainError("power chain needs at least two letters with one exponent each");
  unsigned d = 0;
  for (unsigned e : n) {
    if (e == 0) throw DomainError("power chain exponents must be positive");
    d += e;
  }

  std::vector<std::pair<Matrix, unsigned>> groups;  // factor, multiplicity
  auto add = [&](const Matrix& m, unsigned times) {
    if (times > 0) groups.emplace_back(m, times);
  };
  double q = 0.0;
  if (d % 2 == 0) {
    q = d;
    add(ts[0], n[0] - 1);
    add(ts[0] * ts[1], 1);
    add(ts[1], n[1] - 1);
    for (std::size_t i = 2; i < s; ++i) add(ts[i], n[i]);
  } else if (s == 3) {
    if (n[1] < 2) throw DomainError("odd three-letter chain needs n_2 >= 2");
    q = d - 1;
    add(ts[0], n[0] - 1);
    add(ts[0] * ts[1], 1);
    add(ts[1], n[1] - 2);
    add(ts[1] * ts[2], 1);
    add(ts[2], n[2] - 1);
  } else if (s >= 4) {
    q = d - 1;
    add(ts[0], n[0] - 1);
    add(ts[0] * ts[1], 1);
    add(ts[1], n[1] - 1);
    add(ts[2], n[2] - 1);
    add(ts[2] * ts[3], 1);
    add(ts[3], n[3] - 1);
    for (std::size_t i = 4; i < s; ++i) add(ts[i], n[i]);
  } else {
    throw DomainError("odd total degree needs at least three letters");
  }

  Matrix word = Matrix::Identity(ts[0].rows(), ts[0].cols());
  for (std::size_t i = 0; i < s; ++i)
    for (unsigned e = 0; e < n[i]; ++e) word = word * ts[i];
  double rhs = 1.0;
  for (const auto& [m, times] : groups) rhs *= std::pow(nc_lp_norm(m, q), times);
  return compare(nc_lp_norm(word, 1.0), rhs);
}

std::size_t InequalitySweepReport::total_checked() const {
  std::size_t total = 0;
  for (const auto& f : families) total += f.checked;
  return total;
}

std::size_t InequalitySweepReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& f : families) total += f.violations;
  return total;
}

InequalitySweepReport verify_inequalities(std::size_t instances, std::uint64_t seed, std::size_t dimension) {
  if (dimension == 0) throw DomainError("matrix dimension must be positive");
  auto rng = trial_engine(seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> kind_pick(0, 3);
  const auto bernoulli = Measure::bernoulli(Rational(1, 2));

  auto random_matrix = [&]() -> Matrix {
    switch (kind_pick(rng)) {
      case 0: return gaussian(rng, dimension) / std::sqrt(static_cast<double>(dimension));
      case 1: return sample_goe(rng, dimension);
      case 2: return sample_wishart(rng, dimension);
      default: return sample_rotated_diagonal(rng, dimension, *bernoulli.as_atomic());
    }
  };
  auto random_symmetric = [&]() -> Matrix {
    Matrix m = random_matrix();
    return (m + m.transpose()) / 2.0;
  };
  auto random_exponent = [&]() { return 1.0 + 5.0 * unit(rng); };
  auto conjugate_exponents = [&](std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (double& x : w) total += (x = 0.05 + unit(rng));
    std::vector<double> ps(k);
    for (std::size_t i = 0; i < k; ++i) ps[i] = total / w[i];
    // Recompute the last one so the reciprocals sum to 1 in floating point.
    double rest = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) rest += 1.0 / ps[i];
    ps[k - 1] = 1.0 / (1.0 - rest);
    return ps;
  };

  InequalitySweepReport report;
  const char* names[] = {"ideal", "trace-holder", "l1-holder", "minkowski",
                         "chain-even", "chain-odd-three", "chain-odd-general"};
  for (const char* name : names) report.families.push_back({name});

  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t family = i % report.families.size();
    InequalityCheck check;
    switch (family) {
      case 0: check = check_ideal(random_matrix(), random_matrix(), random_matrix(), random_exponent()); break;
      case 1:
      case 2: {
        const std::size_t k = 2 + static_cast<std::size_t>(unit(rng) * 3.0);
        std::vector<Matrix> xs;
        for (std::size_t j = 0; j < k; ++j) xs.push_back(random_matrix());
        const auto ps = conjugate_exponents(k);
        check = family == 1 ? check_trace_holder(xs, ps) : check_l1_holder(xs, ps);
        break;
      }
      case 3: check = check_minkowski(random_matrix(), random_matrix(), random_exponent()); break;
      default: {
        // Self-adjoint letters; exponents chosen so the chain's parity matches the family.
        std::size_t s = family == 4 ? 2 + static_cast<std::size_t>(unit(rng) * 3.0)
                      : family == 5 ? 3
                                    : 4 + static_cast<std::size_t>(unit(rng) * 2.0);
        std::vector<unsigned> n(s);
        unsigned d = 0;
        for (auto& e : n) d += (e = 1 + static_cast<unsigned>(unit(rng) * 3.0));
        if (family == 5 && n[1] < 2) {
          d += 2 - n[1];
          n[1] = 2;
        }
        const bool want_even = family == 4;
        if ((d % 2 == 0) != want_even) {
          ++n[s - 1];
          ++d;
        }
        std::vector<Matrix> ts;
        for (std::size_t j = 0; j < s; ++j) ts.push_back(random_symmetric());
        check = check_power_chain(ts, n);
        break;
      }
    }
    auto& stats = report.families[family];
    ++stats.checked;
    if (!check.holds) ++stats.violations;
    if (check.rhs > 0.0) stats.worst_ratio = std::max(stats.worst_ratio, check.lhs / check.rhs);
  }
  return report;
}

}  // namespace freeconv
