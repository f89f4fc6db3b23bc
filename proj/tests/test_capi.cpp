#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "freeconv/freeconv.h"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

Json take(char* raw) {
  REQUIRE(raw != nullptr);
  Json j = Json::parse(raw);
  fc_string_free(raw);
  return j;
}

fc_measure* measure(const char* json) {
  fc_measure* m = nullptr;
  REQUIRE(fc_measure_from_json(json, &m) == FC_OK);
  return m;
}

const char* kBernoulli = R"({"kind":"atomic","atoms":[["0","1/2"],["1","1/2"]]})";

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::strlen(fc_version()) > 0);
  fc_measure* m = nullptr;
  CHECK(fc_measure_from_json("{not json", &m) == FC_ERR_PARSE);
  CHECK(m == nullptr);
  CHECK(std::string(fc_last_error()).find("invalid JSON") != std::string::npos);
  CHECK(fc_measure_from_json(R"({"kind":"cauchy"})", &m) == FC_ERR_PARSE);
  CHECK(fc_measure_from_json(R"({"kind":"atomic","atoms":[["0","1/2"]]})", &m) == FC_ERR_DOMAIN);
  CHECK(fc_measure_from_json(nullptr, &m) == FC_ERR_DOMAIN);
  m = measure(kBernoulli);
  CHECK(std::string(fc_last_error()).empty());
  fc_measure_free(m);
  fc_measure_free(nullptr);
}

TEST_CASE("moments and cumulants") {
  fc_measure* m = measure(kBernoulli);
  char* out = nullptr;
  REQUIRE(fc_moments(m, 3, &out) == FC_OK);
  CHECK(take(out)["moments"] == Json::array({"1/2", "1/2", "1/2"}));

  fc_sequence* s = nullptr;
  REQUIRE(fc_sequence_from_measure(m, 4, &s) == FC_OK);
  REQUIRE(fc_cumulants(s, "boolean", &out) == FC_OK);
  CHECK(take(out)["cumulants"] == Json::array({"1/2", "1/4", "1/8", "1/16"}));
  CHECK(fc_cumulants(s, "classical", &out) == FC_ERR_PARSE);
  fc_sequence_free(s);

  REQUIRE(fc_sequence_from_json(R"({"moments":["0","1","0","2"]})", &s) == FC_OK);
  REQUIRE(fc_cumulants(s, "free", &out) == FC_OK);
  CHECK(take(out)["cumulants"] == Json::array({"0", "1", "0", "0"}));

  fc_sequence* t = nullptr;
  REQUIRE(fc_sequence_from_json(R"({"moments":[0, 1, 0, 2]})", &t) == FC_OK);
  REQUIRE(fc_boxplus(s, t, &out) == FC_OK);
  CHECK(take(out)["moments"] == Json::array({"0", "2", "0", "8"}));
  fc_sequence_free(s);
  fc_sequence_free(t);

  REQUIRE(fc_krein_check(m, 3, &out) == FC_OK);
  CHECK(take(out)["decays"] == true);
  fc_measure_free(m);
}

TEST_CASE("multiplicative convolution through every method") {
  fc_measure* a = measure(kBernoulli);
  fc_measure* b = measure(R"({"kind":"atomic","atoms":[["1","1/2"],["2","1/2"]]})");
  char* out = nullptr;
  REQUIRE(fc_boxtimes(a, b, 5, "all", &out) == FC_OK);
  const Json j = take(out);
  CHECK(j["taylor_equals_oracle"] == true);
  CHECK(j["taylor"] == j["oracle"]);
  CHECK(j["max_discrepancy"].get<double>() < 1e-6);
  CHECK(fc_boxtimes(a, b, 5, "magic", &out) == FC_ERR_PARSE);

  fc_measure* zero = measure(R"({"kind":"atomic","atoms":[["0","1"]]})");
  CHECK(fc_boxtimes(zero, b, 3, "taylor", &out) == FC_ERR_DOMAIN);
  fc_measure_free(zero);

  REQUIRE(fc_subordinate(a, b, -0.1, 0.0, 1e-13, 500, &out) == FC_OK);
  const Json s = take(out);
  CHECK(s["residuals"][0].get<double>() < 1e-12);
  CHECK(fc_subordinate(a, b, -5.0, 0.0, 1e-13, 1, &out) == FC_ERR_NONCONVERGENCE);
  fc_measure_free(a);
  fc_measure_free(b);
}

TEST_CASE("diagnostics") {
  fc_measure* d = measure(R"({"kind":"atomic","atoms":[["1","1"]]})");
  char* out = nullptr;
  REQUIRE(fc_diagnose(d, 0.5, &out) == FC_OK);
  const Json j = take(out);
  CHECK(j["sandwich_holds"] == true);
  CHECK(j["integral"].get<double>() == doctest::Approx(1.0));
  CHECK(fc_diagnose(d, 1.5, &out) == FC_ERR_DOMAIN);
  fc_measure* b = measure(kBernoulli);
  REQUIRE(fc_closure_check(d, b, 0.5, 0.5, &out) == FC_OK);
  CHECK(take(out)["verdict"] == "finite");
  fc_measure_free(b);
  fc_measure_free(d);
}

TEST_CASE("mixed moments and characterization") {
  fc_measure* b = measure(kBernoulli);
  fc_sequence* s = nullptr;
  REQUIRE(fc_sequence_from_measure(b, 4, &s) == FC_OK);
  const fc_sequence* pair[] = {s, s};
  char* out = nullptr;
  REQUIRE(fc_mixed_moment(pair, 2, "T1 T2 T1 T2", &out) == FC_OK);
  CHECK(take(out)["value"] == "3/16");
  CHECK(fc_mixed_moment(pair, 2, "T1 T3", &out) == FC_ERR_DOMAIN);
  fc_sequence_free(s);
  fc_measure_free(b);

  fc_qform* form = nullptr;
  REQUIRE(fc_qform_preset_mean_variance(2, &form) == FC_OK);
  REQUIRE(fc_validate_qform(form, &out) == FC_OK);
  CHECK(take(out)["passes"] == true);
  fc_sequence* semi = nullptr;
  REQUIRE(fc_sequence_from_json(R"({"moments":["0","1","0","2","0","5"]})", &semi) == FC_OK);
  REQUIRE(fc_characterize(form, semi, 6, &out) == FC_OK);
  CHECK(take(out)["verdict"] == "consistent-with-free");
  fc_qform_free(form);

  REQUIRE(fc_qform_from_json(R"({"n":2,"A":[["1","0"],["0","1"]],"b":["1","1"]})", &form) == FC_OK);
  CHECK(fc_characterize(form, semi, 6, &out) == FC_ERR_DOMAIN);
  CHECK(std::string(fc_last_error()).find("A b = 0") != std::string::npos);
  fc_qform_free(form);
  fc_sequence_free(semi);
  CHECK(fc_qform_from_json(R"({"n":3,"A":[["1","0"],["0","1"]],"b":["1","1"]})", &form) == FC_ERR_PARSE);
}

TEST_CASE("matrix lab") {
  const char* cfg =
      R"({"ensemble":"rotated-diagonal","N":32,"count":2,"seed":5,"trials":20,)"
      R"("words":["T1 T2 T1 T2"],"measure":{"kind":"atomic","atoms":[["0","1/2"],["1","1/2"]]}})";
  char* out = nullptr;
  REQUIRE(fc_matrixlab(cfg, &out) == FC_OK);
  const Json a = take(out);
  CHECK(a["words"][0]["exact"] == "3/16");
  CHECK(a["words"][0].contains("z_score"));
  REQUIRE(fc_matrixlab(cfg, &out) == FC_OK);
  CHECK(take(out) == a);
  CHECK(fc_matrixlab(R"({"ensemble":"gue","words":["T1"]})", &out) == FC_ERR_PARSE);
  CHECK(fc_matrixlab(R"({"ensemble":"goe","N":8,"trials":1,"words":["T1"]})", &out) == FC_ERR_DOMAIN);

  REQUIRE(fc_inequalities(70, 1, 5, &out) == FC_OK);
  const Json sweep = take(out);
  CHECK(sweep["checked"] == 70);
  CHECK(sweep["violations"] == 0);
}
