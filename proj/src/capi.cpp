#include "freeconv/freeconv.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "freeconv/characterize.hpp"
#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"
#include "freeconv/json_io.hpp"
#include "freeconv/matrix_lab.hpp"
#include "freeconv/transforms.hpp"
#include "freeconv/word_engine.hpp"

struct fc_measure {
  freeconv::Measure value;
};
struct fc_sequence {
  freeconv::MomentSequence value;
};
struct fc_qform {
  freeconv::QuadraticFormSpec value;
};

namespace {

using freeconv::Json;

thread_local std::string g_last_error;

fc_status fail(fc_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class F>
fc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return FC_OK;
  } catch (const freeconv::Error& e) {
    return fail(static_cast<fc_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FC_ERR_PARSE, std::string("malformed JSON value: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(FC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FC_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) { *out = dup_string(j.dump()); }

void require(const void* p, const char* what) {
  if (!p) throw freeconv::DomainError(std::string(what) + " must not be null");
}

// Largest |a_i - b_i| / max(1, |a_i|).
double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  return worst;
}

std::vector<double> to_doubles(const freeconv::MomentSequence& m) {
  std::vector<double> out;
  for (const auto& v : m.values()) out.push_back(v.get_d());
  return out;
}

}  // namespace

extern "C" {

const char* fc_version(void) { return "0.1.0"; }

const char* fc_last_error(void) { return g_last_error.c_str(); }

void fc_string_free(char* s) { std::free(s); }

fc_status fc_measure_from_json(const char* json, fc_measure** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new fc_measure{freeconv::measure_from_json(freeconv::parse_json(json))};
  });
}

void fc_measure_free(fc_measure* m) { delete m; }

fc_status fc_sequence_from_json(const char* json, fc_sequence** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new fc_sequence{freeconv::sequence_from_json(freeconv::parse_json(json))};
  });
}

fc_status fc_sequence_from_measure(const fc_measure* m, unsigned order, fc_sequence** out) {
  return guarded([&] {
    require(m, "measure");
    require(out, "out");
    *out = new fc_sequence{freeconv::moments(m->value, order)};
  });
}

void fc_sequence_free(fc_sequence* s) { delete s; }

fc_status fc_qform_from_json(const char* json, fc_qform** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new fc_qform{freeconv::qform_from_json(freeconv::parse_json(json))};
  });
}

fc_status fc_qform_preset_mean_variance(unsigned n, fc_qform** out) {
  return guarded([&] {
    require(out, "out");
    *out = new fc_qform{freeconv::preset_sample_mean_variance(n)};
  });
}

void fc_qform_free(fc_qform* q) { delete q; }

fc_status fc_moments(const fc_measure* m, unsigned order, char** out_json) {
  return guarded([&] {
    require(m, "measure");
    require(out_json, "out_json");
    emit({{"moments", freeconv::to_json(freeconv::moments(m->value, order).values())}}, out_json);
  });
}

fc_status fc_cumulants(const fc_sequence* s, const char* kind, char** out_json) {
  return guarded([&] {
    require(s, "sequence");
    require(kind, "kind");
    require(out_json, "out_json");
    const std::string k = kind;
    Json values;
    if (k == "boolean") {
      values = freeconv::to_json(freeconv::boolean_from_moments(s->value).values());
    } else if (k == "free") {
      values = freeconv::to_json(freeconv::free_from_moments(s->value).values());
    } else {
      throw freeconv::ParseError("cumulant kind must be boolean or free, got \"" + k + "\"");
    }
    emit({{"kind", k}, {"cumulants", values}}, out_json);
  });
}

fc_status fc_krein_check(const fc_measure* m, unsigned p, char** out_json) {
  return guarded([&] {
    require(m, "measure");
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::krein_expansion_check(m->value, freeconv::moments(m->value, p), p)), out_json);
  });
}

fc_status fc_boxplus(const fc_sequence* a, const fc_sequence* b, char** out_json) {
  return guarded([&] {
    require(a, "first sequence");
    require(b, "second sequence");
    require(out_json, "out_json");
    emit({{"moments", freeconv::to_json(freeconv::boxplus_moments(a->value, b->value).values())}}, out_json);
  });
}

fc_status fc_boxtimes(const fc_measure* a, const fc_measure* b, unsigned order, const char* method,
                      char** out_json) {
  return guarded([&] {
    require(a, "first measure");
    require(b, "second measure");
    require(method, "method");
    require(out_json, "out_json");
    const std::string how = method;
    const bool all = how == "all";
    if (!all && how != "taylor" && how != "oracle" && how != "subordination") {
      throw freeconv::ParseError("method must be taylor, subordination, oracle or all, got \"" + how + "\"");
    }
    if (order == 0) throw freeconv::DomainError("order must be at least 1");
    Json report = {{"order", order}, {"method", how}};
    std::optional<freeconv::MomentSequence> taylor, oracle;
    std::optional<freeconv::NumericMoments> numeric;
    if (all || how == "taylor" || how == "oracle") {
      const auto m1 = freeconv::moments(a->value, order);
      const auto m2 = freeconv::moments(b->value, order);
      if (all || how == "taylor") taylor = freeconv::boxtimes_moments(m1, m2, order);
      if (all || how == "oracle") oracle = freeconv::boxtimes_word_oracle(m1, m2, order);
    }
    if (all || how == "subordination") numeric = freeconv::boxtimes_subordination_moments(a->value, b->value, order);
    if (taylor) report["taylor"] = freeconv::to_json(taylor->values());
    if (oracle) report["oracle"] = freeconv::to_json(oracle->values());
    if (numeric) report["subordination"] = freeconv::to_json(*numeric);
    if (all) {
      report["taylor_equals_oracle"] = *taylor == *oracle;
      report["max_discrepancy"] = max_rel_diff(to_doubles(*taylor), numeric->moments);
    }
    emit(report, out_json);
  });
}

fc_status fc_subordinate(const fc_measure* a, const fc_measure* b, double z_re, double z_im, double tol,
                         int max_iter, char** out_json) {
  return guarded([&] {
    require(a, "first measure");
    require(b, "second measure");
    require(out_json, "out_json");
    if (!(tol > 0)) throw freeconv::DomainError("tolerance must be positive");
    if (max_iter <= 0) throw freeconv::DomainError("max_iter must be positive");
    emit(freeconv::to_json(
             freeconv::solve_subordination(a->value, b->value, freeconv::Complex(z_re, z_im), tol, max_iter)),
         out_json);
  });
}

fc_status fc_diagnose(const fc_measure* m, double alpha, char** out_json) {
  return guarded([&] {
    require(m, "measure");
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::fractional_diagnostics(m->value, alpha)), out_json);
  });
}

fc_status fc_closure_check(const fc_measure* a, const fc_measure* b, double alpha, double beta, char** out_json) {
  return guarded([&] {
    require(a, "first measure");
    require(b, "second measure");
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::boxtimes_fractional_closure_check(a->value, b->value, alpha, beta)), out_json);
  });
}

fc_status fc_mixed_moment(const fc_sequence* const* marginals, size_t count, const char* word, char** out_json) {
  return guarded([&] {
    require(marginals, "marginals");
    require(word, "word");
    require(out_json, "out_json");
    std::vector<freeconv::MomentSequence> seqs;
    for (size_t i = 0; i < count; ++i) {
      require(marginals[i], "marginal");
      seqs.push_back(marginals[i]->value);
    }
    const auto w = freeconv::Word::parse(word);
    emit({{"word", w.to_string()}, {"value", freeconv::to_string(freeconv::mixed_moment(seqs, w))}}, out_json);
  });
}

fc_status fc_validate_qform(const fc_qform* q, char** out_json) {
  return guarded([&] {
    require(q, "quadratic form");
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::validate_spec(q->value)), out_json);
  });
}

fc_status fc_characterize(const fc_qform* q, const fc_sequence* marginal, unsigned max_len, char** out_json) {
  return guarded([&] {
    require(q, "quadratic form");
    require(marginal, "marginal");
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::freeness_dichotomy(q->value, marginal->value, max_len)), out_json);
  });
}

fc_status fc_matrixlab(const char* config_json, char** out_json) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out_json, "out_json");
    const Json cfg = freeconv::parse_json(config_json);
    if (!cfg.is_object()) throw freeconv::ParseError("matrixlab config must be a JSON object");

    freeconv::MatrixEnsembleSpec spec;
    spec.kind = freeconv::parse_ensemble(cfg.value("ensemble", std::string("goe")));
    spec.dimension = cfg.value("N", std::size_t{256});
    spec.count = cfg.value("count", std::size_t{2});
    spec.seed = cfg.value("seed", std::uint64_t{0});
    if (cfg.contains("measure")) spec.diagonal = freeconv::measure_from_json(cfg.at("measure"));
    const std::size_t trials = cfg.value("trials", std::size_t{200});
    const unsigned threads = cfg.value("threads", 1u);

    if (!cfg.contains("words") || !cfg.at("words").is_array() || cfg.at("words").empty()) {
      throw freeconv::ParseError("matrixlab config needs a non-empty \"words\" array");
    }
    std::vector<freeconv::Word> words;
    std::size_t longest = 1;
    for (const auto& w : cfg.at("words")) {
      words.push_back(freeconv::Word::parse(w.get<std::string>()));
      longest = std::max(longest, words.back().size());
    }

    const auto estimates = freeconv::estimate_word_traces(spec, words, trials, threads);
    const auto marginal = freeconv::ensemble_marginal(spec, longest);
    freeconv::MixedMomentCache exact(std::vector<freeconv::MomentSequence>(spec.count, marginal));
    const double slack_bias = 5.0 / static_cast<double>(spec.dimension);

    Json rows = Json::array();
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& e = estimates[i];
      const freeconv::Rational value = exact(words[i]);
      const double diff = e.mean - value.get_d();
      Json row = freeconv::to_json(e);
      row["exact"] = freeconv::to_string(value);
      row["exact_value"] = value.get_d();
      row["z_score"] = e.standard_error > 0 ? Json(diff / e.standard_error) : Json(nullptr);
      row["within_tolerance"] = std::abs(diff) <= 3 * e.standard_error + slack_bias;
      rows.push_back(row);
    }
    emit({{"ensemble", freeconv::to_string(spec.kind)},
          {"N", spec.dimension},
          {"count", spec.count},
          {"seed", spec.seed},
          {"trials", trials},
          {"words", rows}},
         out_json);
  });
}

fc_status fc_inequalities(size_t instances, uint64_t seed, size_t dimension, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    emit(freeconv::to_json(freeconv::verify_inequalities(instances, seed, dimension)), out_json);
  });
}

}  // extern "C"
