// freeconv command-line front end. Talks to the library only through freeconv.h.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freeconv/freeconv.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitInternal = 1;

struct Failure {
  int code;
  std::string message;
};

void check(fc_status status) {
  if (status != FC_OK) throw Failure{status == FC_ERR_INTERNAL ? kExitInternal : static_cast<int>(status),
                                     fc_last_error()};
}

struct MeasureDeleter {
  void operator()(fc_measure* m) const { fc_measure_free(m); }
};
struct SequenceDeleter {
  void operator()(fc_sequence* s) const { fc_sequence_free(s); }
};
struct QformDeleter {
  void operator()(fc_qform* q) const { fc_qform_free(q); }
};
using MeasurePtr = std::unique_ptr<fc_measure, MeasureDeleter>;
using SequencePtr = std::unique_ptr<fc_sequence, SequenceDeleter>;
using QformPtr = std::unique_ptr<fc_qform, QformDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{FC_ERR_PARSE, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MeasurePtr load_measure(const std::string& path) {
  fc_measure* m = nullptr;
  const fc_status st = fc_measure_from_json(read_file(path).c_str(), &m);
  if (st != FC_OK) throw Failure{st, path + ": " + fc_last_error()};
  return MeasurePtr(m);
}

// Accepts a measure file or a {"moments": [...]} file.
SequencePtr load_sequence(const std::string& path, unsigned order) {
  const std::string text = read_file(path);
  fc_sequence* s = nullptr;
  Json probe = Json::parse(text, nullptr, false);
  if (probe.is_object() && probe.contains("moments")) {
    const fc_status st = fc_sequence_from_json(text.c_str(), &s);
    if (st != FC_OK) throw Failure{st, path + ": " + fc_last_error()};
    return SequencePtr(s);
  }
  MeasurePtr m = load_measure(path);
  check(fc_sequence_from_measure(m.get(), order, &s));
  return SequencePtr(s);
}

Json take(char* raw) {
  Json j = Json::parse(raw);
  fc_string_free(raw);
  return j;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON writer that prints floats with 12 significant digits.
void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      bool scalar = true;
      for (const auto& v : j) scalar = scalar && !v.is_structured();
      if (scalar) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << fmt_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return v.dump();
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailer;  // free-form lines after the table
};

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  for (const auto& line : t.trailer) os << line << "\n";
}

Table indexed_columns(const std::vector<std::pair<std::string, const Json*>>& cols) {
  Table t;
  t.columns.push_back("k");
  std::size_t n = 0;
  for (const auto& [name, values] : cols) {
    t.columns.push_back(name);
    n = std::max(n, values->size());
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> row{std::to_string(k + 1)};
    for (const auto& [name, values] : cols) row.push_back(k < values->size() ? cell((*values)[k]) : "");
    t.rows.push_back(row);
  }
  return t;
}

Table key_values(const Json& j) {
  Table t;
  t.columns = {"key", "value"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_structured()) {
      std::ostringstream ss;
      if (it.value().is_array() && it.value().size() == 2 && !it.value()[0].is_structured()) {
        ss << cell(it.value()[0]) << " " << cell(it.value()[1]);
      } else {
        continue;
      }
      t.rows.push_back({it.key(), ss.str()});
    } else {
      t.rows.push_back({it.key(), cell(it.value())});
    }
  }
  return t;
}

Table rows_table(const Json& rows, const std::vector<std::string>& keys) {
  Table t;
  t.columns = keys;
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (const auto& k : keys) line.push_back(r.contains(k) ? cell(r[k]) : "");
    t.rows.push_back(line);
  }
  return t;
}

struct RunConfig {
  std::string command;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string command_line;
};

void write_output(const RunConfig& cfg, const Json& result, const Table& table) {
  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) throw Failure{FC_ERR_PARSE, "cannot write " + cfg.output};
  }
  std::ostream& os = cfg.output.empty() ? std::cout : file;
  if (cfg.format == "json") {
    Json doc = {{"header",
                 {{"version", fc_version()},
                  {"command", cfg.command},
                  {"command_line", cfg.command_line},
                  {"seed", cfg.seed}}},
                {"result", result}};
    write_json(os, doc);
    os << "\n";
  } else {
    os << "# freeconv " << fc_version() << "\n";
    os << "# command: " << cfg.command_line << "\n";
    os << "# seed: " << cfg.seed << "\n";
    write_csv(os, table);
  }
}

std::size_t resolve_threads(std::size_t flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("FREECONV_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw Failure{FC_ERR_PARSE, std::string("FREECONV_THREADS must be a positive integer, got \"") + env + "\""};
  }
  return 1;
}

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    const std::string a = argv[i];
    out += a.find_first_of(" \t\"'") == std::string::npos ? a : Json(a).dump();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-level free probability toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fc_version()));

  RunConfig cfg;
  cfg.command_line = join_argv(argc, argv);
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("-o,--output", cfg.output, "Write to this file instead of stdout");
  app.add_option("--seed", cfg.seed, "Random seed (matrixlab)")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker cap; falls back to FREECONV_THREADS, then 1");

  unsigned order = 4;
  std::string kind = "boolean";
  std::string method = "taylor";
  std::vector<std::string> files;

  auto* moments = app.add_subcommand("moments", "Exact moments m_1..m_D of a measure");
  moments->add_option("measure", files, "Measure JSON")->required()->expected(1);
  moments->add_option("--order", order, "D")->capture_default_str();

  auto* cumulants = app.add_subcommand("cumulants", "Boolean or free cumulants");
  cumulants->add_option("input", files, "Measure or moment-sequence JSON")->required()->expected(1);
  cumulants->add_option("--order", order, "D")->capture_default_str();
  cumulants->add_option("--kind", kind, "boolean|free")->check(CLI::IsMember({"boolean", "free"}))->capture_default_str();

  auto* boxplus = app.add_subcommand("boxplus", "Moments of the free additive convolution");
  boxplus->add_option("inputs", files, "Two measure or moment-sequence files")->required()->expected(2);
  boxplus->add_option("--order", order, "D")->capture_default_str();

  auto* boxtimes = app.add_subcommand("boxtimes", "Moments of the free multiplicative convolution");
  boxtimes->add_option("measures", files, "Two measures on [0, inf)")->required()->expected(2);
  boxtimes->add_option("--order", order, "p")->capture_default_str();
  boxtimes->add_option("--method", method, "taylor|subordination|oracle|all")
      ->check(CLI::IsMember({"taylor", "subordination", "oracle", "all"}))
      ->capture_default_str();

  double z_re = -1.0, z_im = 0.0, tol = 1e-13;
  int max_iter = 500;
  auto* subordinate = app.add_subcommand("subordinate", "Solve for Z1, Z2 at one point z");
  subordinate->add_option("measures", files, "Two measures on [0, inf)")->required()->expected(2);
  subordinate->add_option("--re", z_re, "Re z")->capture_default_str();
  subordinate->add_option("--im", z_im, "Im z")->capture_default_str();
  subordinate->add_option("--tol", tol, "Relative residual tolerance")->capture_default_str();
  subordinate->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();

  double alpha = 0.5, beta = 0.0;
  std::string closure_with;
  unsigned krein_p = 0;
  auto* diagnose = app.add_subcommand("diagnose", "Fractional-moment diagnostics");
  diagnose->add_option("measure", files, "Measure on [0, inf)")->required()->expected(1);
  diagnose->add_option("--alpha", alpha, "0 < alpha < 1")->capture_default_str();
  diagnose->add_option("--closure-with", closure_with, "Second measure: check m_{alpha beta} of the product");
  diagnose->add_option("--beta", beta, "Exponent for --closure-with");
  diagnose->add_option("--krein", krein_p, "Tabulate the order-p expansion remainder of K(-x) instead");

  std::string preset;
  unsigned preset_n = 2, max_len = 8;
  bool validate_only = false;
  auto* characterize = app.add_subcommand("characterize", "Freeness dichotomy for a linear/quadratic pair");
  characterize->add_option("inputs", files, "[form.json] marginal.json")->required()->expected(1, 2);
  characterize->add_option("--preset", preset, "Built-in form")->check(CLI::IsMember({"mean-variance"}));
  characterize->add_option("--n", preset_n, "Number of variables for --preset")->capture_default_str();
  characterize->add_option("--max-len", max_len, "Largest total degree")->capture_default_str();
  characterize->add_flag("--validate-only", validate_only, "Only check the form's conditions");

  std::string ensemble = "goe", diag_measure;
  std::vector<std::string> words;
  std::size_t dim = 256, count = 2, trials = 200, inequalities = 0, ineq_dim = 6;
  auto* matrixlab = app.add_subcommand("matrixlab", "Monte Carlo traces against exact free values");
  matrixlab->add_option("--ensemble", ensemble, "goe|rotated-diagonal|wishart")->capture_default_str();
  matrixlab->add_option("--word", words, "Word such as \"T1 T2 T1 T2\"; repeatable");
  matrixlab->add_option("--N", dim, "Matrix size")->capture_default_str();
  matrixlab->add_option("--count", count, "Number of matrices")->capture_default_str();
  matrixlab->add_option("--trials", trials, "Independent samples")->capture_default_str();
  matrixlab->add_option("--measure", diag_measure, "Spectrum for rotated-diagonal");
  matrixlab->add_option("--inequalities", inequalities, "Also check this many random norm inequalities");
  matrixlab->add_option("--inequality-dim", ineq_dim, "Matrix size for --inequalities")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : FC_ERR_PARSE;
  }

  try {
    cfg.threads = resolve_threads(cfg.threads);
    Json result;
    Table table;

    if (*moments) {
      cfg.command = "moments";
      MeasurePtr m = load_measure(files[0]);
      char* raw = nullptr;
      check(fc_moments(m.get(), order, &raw));
      result = take(raw);
      table = indexed_columns({{"m_k", &result["moments"]}});
    } else if (*cumulants) {
      cfg.command = "cumulants";
      SequencePtr s = load_sequence(files[0], order);
      char* raw = nullptr;
      check(fc_cumulants(s.get(), kind.c_str(), &raw));
      result = take(raw);
      table = indexed_columns({{kind == "boolean" ? "r_k" : "kappa_k", &result["cumulants"]}});
    } else if (*boxplus) {
      cfg.command = "boxplus";
      SequencePtr a = load_sequence(files[0], order);
      SequencePtr b = load_sequence(files[1], order);
      char* raw = nullptr;
      check(fc_boxplus(a.get(), b.get(), &raw));
      result = take(raw);
      table = indexed_columns({{"m_k", &result["moments"]}});
    } else if (*boxtimes) {
      cfg.command = "boxtimes";
      MeasurePtr a = load_measure(files[0]);
      MeasurePtr b = load_measure(files[1]);
      char* raw = nullptr;
      check(fc_boxtimes(a.get(), b.get(), order, method.c_str(), &raw));
      result = take(raw);
      std::vector<std::pair<std::string, const Json*>> cols;
      if (result.contains("taylor")) cols.emplace_back("taylor", &result["taylor"]);
      if (result.contains("oracle")) cols.emplace_back("oracle", &result["oracle"]);
      if (result.contains("subordination")) cols.emplace_back("subordination", &result["subordination"]["moments"]);
      table = indexed_columns(cols);
      if (result.contains("max_discrepancy")) {
        table.trailer.push_back("taylor_equals_oracle," + cell(result["taylor_equals_oracle"]));
        table.trailer.push_back("max_relative_discrepancy," + cell(result["max_discrepancy"]));
      }
    } else if (*subordinate) {
      cfg.command = "subordinate";
      MeasurePtr a = load_measure(files[0]);
      MeasurePtr b = load_measure(files[1]);
      char* raw = nullptr;
      check(fc_subordinate(a.get(), b.get(), z_re, z_im, tol, max_iter, &raw));
      result = take(raw);
      table = key_values(result);
    } else if (*diagnose) {
      cfg.command = "diagnose";
      MeasurePtr m = load_measure(files[0]);
      char* raw = nullptr;
      if (krein_p > 0) {
        check(fc_krein_check(m.get(), krein_p, &raw));
        result = take(raw);
        table = rows_table(result["rows"], {"x", "remainder", "ratio"});
        table.trailer.push_back("decays," + cell(result["decays"]));
      } else if (!closure_with.empty()) {
        MeasurePtr other = load_measure(closure_with);
        check(fc_closure_check(m.get(), other.get(), alpha, beta, &raw));
        result = take(raw);
        table = rows_table(result["refinements"], {"epsilon", "partial_integral"});
        table.trailer.push_back("verdict," + cell(result["verdict"]));
      } else {
        check(fc_diagnose(m.get(), alpha, &raw));
        result = take(raw);
        result["sandwich"] = fmt_double(result["lower_bound"].get<double>()) + " <= " +
                             fmt_double(result["integral"].get<double>()) + " <= " +
                             fmt_double(result["upper_bound"].get<double>());
        table = key_values(result);
      }
    } else if (*characterize) {
      cfg.command = "characterize";
      QformPtr form;
      std::string marginal_path;
      fc_qform* q = nullptr;
      if (!preset.empty()) {
        if (files.size() != 1) throw Failure{FC_ERR_PARSE, "with --preset give only the marginal file"};
        check(fc_qform_preset_mean_variance(preset_n, &q));
        form.reset(q);
        marginal_path = files[0];
      } else {
        if (files.size() != 2) throw Failure{FC_ERR_PARSE, "expected form.json and marginal.json (or --preset)"};
        const fc_status st = fc_qform_from_json(read_file(files[0]).c_str(), &q);
        if (st != FC_OK) throw Failure{st, files[0] + ": " + fc_last_error()};
        form.reset(q);
        marginal_path = files[1];
      }
      char* raw = nullptr;
      if (validate_only) {
        check(fc_validate_qform(form.get(), &raw));
        result = take(raw);
        table = key_values(result);
      } else {
        SequencePtr marginal = load_sequence(marginal_path, max_len);
        check(fc_characterize(form.get(), marginal.get(), max_len, &raw));
        result = take(raw);
        table = rows_table(result["deviations"], {"pattern", "degree", "joint", "free_prediction", "deviation"});
        table.trailer.push_back("verdict," + cell(result["verdict"]));
      }
    } else if (*matrixlab) {
      cfg.command = "matrixlab";
      if (words.empty() && inequalities == 0) throw Failure{FC_ERR_PARSE, "give at least one --word or --inequalities"};
      if (!words.empty()) {
        Json config = {{"ensemble", ensemble}, {"N", dim},          {"count", count},
                       {"seed", cfg.seed},     {"trials", trials},  {"threads", cfg.threads},
                       {"words", words}};
        if (!diag_measure.empty()) {
          Json parsed = Json::parse(read_file(diag_measure), nullptr, false);
          if (parsed.is_discarded()) throw Failure{FC_ERR_PARSE, diag_measure + ": invalid JSON"};
          config["measure"] = parsed;
        }
        char* raw = nullptr;
        check(fc_matrixlab(config.dump().c_str(), &raw));
        result = take(raw);
        table = rows_table(result["words"], {"word", "mean", "se", "exact", "z_score", "within_tolerance", "trials"});
      }
      if (inequalities > 0) {
        char* raw = nullptr;
        check(fc_inequalities(inequalities, cfg.seed, ineq_dim, &raw));
        result["inequalities"] = take(raw);
        if (words.empty()) table = rows_table(result["inequalities"]["families"], {"family", "checked", "violations", "worst_ratio"});
        table.trailer.push_back("inequalities_checked," + cell(result["inequalities"]["checked"]));
        table.trailer.push_back("inequality_violations," + cell(result["inequalities"]["violations"]));
      }
    }

    write_output(cfg, result, table);
    return 0;
  } catch (const Failure& f) {
    std::cerr << "freeconv: " << f.message << "\n";
    return f.code;
  }
}
