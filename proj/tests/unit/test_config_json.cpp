#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>

#include "gsirs/config.hpp"
#include "gsirs/equilibria.hpp"
#include "gsirs/errors.hpp"
#include "gsirs/report_json.hpp"

using gsirs::Json;

namespace {

Json base_doc() {
  return Json::parse(R"({
    "params": {"Lambda": 10, "mu": 0.2, "gamma1": 0.2, "gamma2": 0.2, "alpha": 0.1, "delta": 0.1},
    "incidence": {"family": "power", "coefficients": {"k": 0.0008, "q": 2}}
  })");
}

std::string config_error_key(const Json& doc) {
  try {
    gsirs::parse_config(doc, "test.json");
  } catch (const gsirs::ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("parse_config reads params, incidence and defaults") {
  const auto c = gsirs::parse_config(base_doc(), "test.json");
  CHECK(c.params.Lambda() == 10.0);
  CHECK(c.params.delta() == 0.1);
  CHECK(c.family == gsirs::Family::power);
  CHECK(c.incidence.f1(50.0, 0.0) == doctest::Approx(2.0));
  CHECK(c.solver.method == gsirs::Method::rk45_adaptive);
  CHECK(c.solver.step_or_tol == 1e-8);
  CHECK(c.solver.t_end == 500.0);
  CHECK(c.scan.n_brackets == 256);
  CHECK_FALSE(c.scan.grid_n.has_value());
}

TEST_CASE("parse_config reads optional solver and scan blocks") {
  auto doc = base_doc();
  doc["solver"] = Json{{"method", "rk4_fixed"}, {"step_or_tol", 0.01}, {"t_end", 50}};
  doc["scan"] = Json{{"grid_n", 101}, {"exclusion", 0.01}, {"n_brackets", 64}};
  const auto c = gsirs::parse_config(doc, "test.json");
  CHECK(c.solver.method == gsirs::Method::rk4_fixed);
  CHECK(c.solver.step_or_tol == 0.01);
  CHECK(c.solver.t_end == 50.0);
  CHECK(*c.scan.grid_n == 101);
  CHECK(*c.scan.exclusion == 0.01);
  CHECK(c.scan.n_brackets == 64);
}

TEST_CASE("parse_config names the offending key") {
  auto missing_mu = base_doc();
  missing_mu["params"].erase("mu");
  CHECK(config_error_key(missing_mu) == "params.mu");

  auto unknown_top = base_doc();
  unknown_top["extra"] = 1;
  CHECK(config_error_key(unknown_top) == "extra");

  auto unknown_param = base_doc();
  unknown_param["params"]["beta"] = 1;
  CHECK(config_error_key(unknown_param) == "params.beta");

  auto negative = base_doc();
  negative["params"]["alpha"] = -0.1;
  CHECK(config_error_key(negative) == "params.alpha");

  auto wrong_type = base_doc();
  wrong_type["params"]["Lambda"] = "ten";
  CHECK(config_error_key(wrong_type) == "params.Lambda");

  auto bad_family = base_doc();
  bad_family["incidence"]["family"] = "linear";
  CHECK(config_error_key(bad_family) == "incidence.family");

  auto bad_coef = base_doc();
  bad_coef["incidence"]["coefficients"]["k"] = 0;
  CHECK(config_error_key(bad_coef) == "incidence.coefficients");

  auto bad_method = base_doc();
  bad_method["solver"] = Json{{"method", "euler"}};
  CHECK(config_error_key(bad_method) == "solver.method");

  auto bad_grid = base_doc();
  bad_grid["scan"] = Json{{"grid_n", 4}};
  CHECK(config_error_key(bad_grid) == "scan.grid_n");

  auto unknown_scan = base_doc();
  unknown_scan["scan"] = Json{{"grid", 4}};
  CHECK(config_error_key(unknown_scan) == "scan.grid");
}

TEST_CASE("ConfigError message carries source, key and constraint") {
  auto doc = base_doc();
  doc["params"].erase("mu");
  try {
    gsirs::parse_config(doc, "cfg.json");
    FAIL("expected ConfigError");
  } catch (const gsirs::InvalidArgument& e) {
    CHECK(std::string(e.what()) == "cfg.json: key 'params.mu': is required");
  }
}

TEST_CASE("load_config reports unreadable and malformed files") {
  CHECK_THROWS_AS(gsirs::load_config("/nonexistent/config.json"), gsirs::ConfigError);
  const auto c = gsirs::load_config(GSIRS_CONFIG_DIR "/example1_r0_above_one.json");
  CHECK(c.params.S0() == 50.0);
}

TEST_CASE("to_json round-trips through parse_config") {
  auto doc = base_doc();
  doc["scan"] = Json{{"grid_n", 51}};
  const auto c = gsirs::parse_config(doc, "a");
  const auto again = gsirs::parse_config(gsirs::to_json(c), "b");
  CHECK(again.params == c.params);
  CHECK(again.coefficients == c.coefficients);
  CHECK(again.scan.grid_n == c.scan.grid_n);
  CHECK(gsirs::dump_json(gsirs::to_json(again)) == gsirs::dump_json(gsirs::to_json(c)));
}

TEST_CASE("example_config matches the worked example") {
  const auto c = gsirs::example_config(0.0008);
  CHECK(c.params == gsirs::ModelParams(10, 0.2, 0.2, 0.2, 0.1, 0.1));
  CHECK(c.coefficients.at("k") == 0.0008);
  CHECK(c.coefficients.at("q") == 2.0);
}

TEST_CASE("dump_json formatting") {
  Json j{{"b", 0.1}, {"a", 1}, {"nan", std::numeric_limits<double>::quiet_NaN()},
         {"inf", std::numeric_limits<double>::infinity()}, {"list", Json::array({1.5, true})},
         {"empty", Json::object()}};
  const std::string s = gsirs::dump_json(j);
  CHECK(s ==
        "{\n"
        "  \"b\": 0.10000000000000001,\n"
        "  \"a\": 1,\n"
        "  \"nan\": null,\n"
        "  \"inf\": null,\n"
        "  \"list\": [\n"
        "    1.5,\n"
        "    true\n"
        "  ],\n"
        "  \"empty\": {}\n"
        "}\n");
}

TEST_CASE("doubles survive a dump and parse exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.8571428571428572, 1e-300, 29.580398915484327}) {
    const Json back = Json::parse(gsirs::dump_json(Json{{"v", v}}));
    CHECK(back["v"].get<double>() == v);
  }
}

TEST_CASE("equilibrium report serialises with its fixed key order") {
  const auto c = gsirs::example_config(0.0008);
  const auto rep = gsirs::find_endemic(c.params, c.incidence);
  const Json j = gsirs::to_json(rep);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys.front() == "r0");
  CHECK(j["endemic"].size() == 1);
  CHECK(gsirs::dump_json(j) == gsirs::dump_json(gsirs::to_json(gsirs::find_endemic(c.params, c.incidence))));
}
