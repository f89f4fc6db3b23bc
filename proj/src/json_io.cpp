#include "freeconv/json_io.hpp"

#include <cmath>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) throw ParseError(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw ParseError(std::string("field \"") + name + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ParseError(std::string("field \"") + name + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<Rational> rationals(const Json& v, const char* name) {
  if (!v.is_array()) throw ParseError(std::string("field \"") + name + "\" must be an array");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(rational_from_json(x));
  return out;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  // Floats go through their shortest decimal form, so 0.1 means 1/10.
  if (j.is_number_float()) return parse_rational(j.dump());
  throw ParseError("expected a rational as \"p/q\" string or number, got " + j.dump());
}

Measure measure_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "atomic") {
    const Json& atoms = field(j, "atoms");
    if (!atoms.is_array() || atoms.empty()) throw ParseError("\"atoms\" must be a non-empty array");
    std::vector<Atom> out;
    for (const auto& a : atoms) {
      if (!a.is_array() || a.size() != 2) throw ParseError("each atom must be [location, weight]");
      out.push_back({rational_from_json(a[0]), rational_from_json(a[1])});
    }
    return Measure::atomic(std::move(out));
  }
  if (kind == "semicircle") return Measure(SemicircleMeasure(number(j, "center"), number(j, "radius")));
  if (kind == "grid") return Measure(DensityGridMeasure(numbers(j, "x"), numbers(j, "f")));
  throw ParseError("unknown measure kind \"" + kind + "\"");
}

Json to_json(const Measure& mu) {
  if (const auto* a = mu.as_atomic()) {
    Json atoms = Json::array();
    for (const auto& atom : a->atoms()) atoms.push_back({to_string(atom.location), to_string(atom.weight)});
    return {{"kind", "atomic"}, {"atoms", atoms}};
  }
  if (const auto* s = mu.as_semicircle()) return {{"kind", "semicircle"}, {"center", s->center}, {"radius", s->radius}};
  const auto* g = mu.as_grid();
  return {{"kind", "grid"}, {"x", g->x()}, {"f", g->f()}};
}

MomentSequence sequence_from_json(const Json& j) {
  auto values = rationals(field(j, "moments"), "moments");
  if (values.empty()) throw ParseError("\"moments\" must not be empty");
  return MomentSequence(std::move(values));
}

QuadraticFormSpec qform_from_json(const Json& j) {
  const Json& rows = field(j, "A");
  if (!rows.is_array()) throw ParseError("\"A\" must be an array of rows");
  std::vector<std::vector<Rational>> a;
  for (const auto& row : rows) a.push_back(rationals(row, "A"));
  auto b = rationals(field(j, "b"), "b");
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<long>() != static_cast<long>(b.size()))) {
    throw ParseError("\"n\" does not match the length of \"b\"");
  }
  return QuadraticFormSpec(std::move(a), std::move(b));
}

Json to_json(const QuadraticFormSpec& spec) {
  Json a = Json::array();
  for (const auto& row : spec.a) a.push_back(to_json(row));
  return {{"n", spec.n()}, {"A", a}, {"b", to_json(spec.b)}};
}

Json to_json(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ValidityReport& r) {
  Json j = {{"symmetric", r.symmetric},
            {"A_b_zero", r.annihilates},
            {"power_sums_first_n", r.power_sums_first_n},
            {"power_sums_all_m", r.power_sums_all},
            {"power_sums_certified_through", r.certified_through},
            {"diagonal_coupling", r.diagonal_coupling},
            {"passes", r.passes()}};
  j["first_vanishing_power"] = r.first_vanishing_power ? Json(*r.first_vanishing_power) : Json(nullptr);
  if (!r.passes()) j["failing_condition"] = r.failing_condition();
  return j;
}

Json to_json(const DichotomyReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"pattern", to_string(e.pattern, true)},
                       {"degree", e.degree},
                       {"joint", to_string(e.joint)},
                       {"free_prediction", to_string(e.free_prediction)},
                       {"deviation", to_string(e.deviation)}});
  }
  return {{"max_word_length", r.max_word_length},
          {"patterns_checked", r.entries.size()},
          {"max_abs_deviation", to_string(r.max_abs_deviation)},
          {"first_nonzero_degree", r.first_nonzero_degree ? Json(*r.first_nonzero_degree) : Json(nullptr)},
          {"verdict", r.verdict_text()},
          {"deviations", entries}};
}

Json to_json(const SubordinationSolution& s) {
  return {{"z", to_json(s.z)},
          {"Z1", to_json(s.z1)},
          {"Z2", to_json(s.z2)},
          {"K", to_json(s.k_value)},
          {"residuals", {s.residual_product, s.residual_krein}},
          {"iterations", s.iterations},
          {"damped", s.damped}};
}

Json to_json(const DiagnosticsReport& r) {
  return {{"alpha", r.alpha},
          {"integral", r.integral_value},
          {"quadrature_error", r.quadrature_error},
          {"lower_bound", r.lower_bound},
          {"upper_bound", r.upper_bound},
          {"c_mu", r.c_mu},
          {"m_alpha", r.m_alpha},
          {"sandwich_holds", r.sandwich_holds()},
          {"verdict", r.finite ? "finite" : "infinite-indicated"}};
}

Json to_json(const ClosureReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back({{"epsilon", row.epsilon}, {"partial_integral", row.partial_integral}});
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"gamma", r.gamma},
          {"x0", r.x0},
          {"integral", number_or_null(r.finite ? r.integral_value : NAN)},
          {"max_residual", r.max_residual},
          {"verdict", r.finite ? "finite" : "infinite-indicated"},
          {"refinements", rows}};
}

Json to_json(const KreinExpansionReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back({{"x", row.x}, {"remainder", row.remainder}, {"ratio", row.ratio}});
  return {{"p", r.p},
          {"burn_in", r.burn_in},
          {"exact", r.exact},
          {"monotone", r.monotone},
          {"final_ratio", r.final_ratio},
          {"decays", r.decays},
          {"rows", rows}};
}

Json to_json(const NumericMoments& n) {
  return {{"moments", n.moments},
          {"boolean_cumulants", n.boolean_cumulants},
          {"max_residual", n.max_residual},
          {"radius", n.radius},
          {"nodes", n.nodes}};
}

Json to_json(const TraceEstimate& t) {
  return {{"word", t.word.to_string()}, {"mean", t.mean}, {"se", t.standard_error}, {"trials", t.trials}};
}

Json to_json(const InequalitySweepReport& r) {
  Json families = Json::array();
  for (const auto& f : r.families) {
    families.push_back(
        {{"family", f.name}, {"checked", f.checked}, {"violations", f.violations}, {"worst_ratio", f.worst_ratio}});
  }
  return {{"checked", r.total_checked()}, {"violations", r.total_violations()}, {"families", families}};
}

}  // namespace freeconv
