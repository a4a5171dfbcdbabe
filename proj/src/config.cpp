#include "gsirs/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "gsirs/errors.hpp"

namespace gsirs {
namespace {

std::string message(std::string_view source, std::string_view key, std::string_view constraint) {
  std::string out(source);
  out += ": key '";
  out += key;
  out += "': ";
  out += constraint;
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(std::string_view key, std::string_view constraint) const {
    throw ConfigError(source_, key, constraint);
  }

  const Json& object(const Json& parent, const std::string& key, const std::string& path) const {
    auto it = parent.find(key);
    if (it == parent.end()) fail(path, "is required");
    if (!it->is_object()) fail(path, "must be an object");
    return *it;
  }

  void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& prefix) const {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) fail(prefix + key, "unknown key");
    }
  }

  double number(const Json& obj, const std::string& key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "is required");
    return as_number(*it, path);
  }

  double as_number(const Json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
  }

  int positive_int(const Json& v, const std::string& path, int minimum) const {
    if (!v.is_number_integer()) fail(path, "must be an integer");
    const auto n = v.get<long long>();
    if (n < minimum || n > 100000) {
      fail(path, "must be an integer in [" + std::to_string(minimum) + ", 100000]");
    }
    return static_cast<int>(n);
  }

 private:
  std::string source_;
};

ModelParams read_params(const Reader& rd, const Json& obj) {
  rd.only_keys(obj, {"Lambda", "mu", "gamma1", "gamma2", "alpha", "delta"}, "params.");
  const double Lambda = rd.number(obj, "Lambda", "params.Lambda");
  const double mu = rd.number(obj, "mu", "params.mu");
  const double gamma1 = rd.number(obj, "gamma1", "params.gamma1");
  const double gamma2 = rd.number(obj, "gamma2", "params.gamma2");
  const double alpha = rd.number(obj, "alpha", "params.alpha");
  const double delta = rd.number(obj, "delta", "params.delta");
  if (!(Lambda > 0.0)) rd.fail("params.Lambda", "must be > 0");
  if (!(mu > 0.0)) rd.fail("params.mu", "must be > 0");
  if (gamma1 < 0.0) rd.fail("params.gamma1", "must be >= 0");
  if (gamma2 < 0.0) rd.fail("params.gamma2", "must be >= 0");
  if (alpha < 0.0) rd.fail("params.alpha", "must be >= 0");
  if (delta < 0.0) rd.fail("params.delta", "must be >= 0");
  return ModelParams(Lambda, mu, gamma1, gamma2, alpha, delta);
}

}  // namespace

ConfigError::ConfigError(std::string_view source, std::string_view key,
                         std::string_view constraint)
    : InvalidArgument(message(source, key, constraint)), key_(key) {}

ModelConfig parse_config(const Json& doc, std::string_view source) {
  const Reader rd(source);
  if (!doc.is_object()) rd.fail("<root>", "document must be a JSON object");
  rd.only_keys(doc, {"params", "incidence", "solver", "scan"}, "");

  const ModelParams params = read_params(rd, rd.object(doc, "params", "params"));

  const Json& inc = rd.object(doc, "incidence", "incidence");
  rd.only_keys(inc, {"family", "coefficients"}, "incidence.");
  auto fam_it = inc.find("family");
  if (fam_it == inc.end()) rd.fail("incidence.family", "is required");
  if (!fam_it->is_string()) rd.fail("incidence.family", "must be a string");
  Family family = Family::bilinear;
  try {
    family = parse_family(fam_it->get<std::string>());
  } catch (const InvalidArgument&) {
    rd.fail("incidence.family",
            "must be one of bilinear, power, saturated_in_I, psi_ratio, ruan");
  }
  Coefficients coefficients;
  auto coef_it = inc.find("coefficients");
  if (coef_it == inc.end()) rd.fail("incidence.coefficients", "is required");
  if (!coef_it->is_object()) rd.fail("incidence.coefficients", "must be an object");
  for (const auto& [name, value] : coef_it->items()) {
    coefficients[name] = rd.as_number(value, "incidence.coefficients." + name);
  }
  std::optional<IncidenceFunction> incidence;
  try {
    incidence = make_builtin(family, coefficients);
  } catch (const InvalidArgument& e) {
    rd.fail("incidence.coefficients", e.what());
  }

  SolverConfig solver;
  if (auto it = doc.find("solver"); it != doc.end()) {
    if (!it->is_object()) rd.fail("solver", "must be an object");
    rd.only_keys(*it, {"method", "step_or_tol", "t_end"}, "solver.");
    if (auto m = it->find("method"); m != it->end()) {
      if (!m->is_string()) rd.fail("solver.method", "must be a string");
      try {
        solver.method = parse_method(m->get<std::string>());
      } catch (const InvalidArgument&) {
        rd.fail("solver.method", "must be rk4_fixed or rk45_adaptive");
      }
    }
    if (it->contains("step_or_tol")) {
      solver.step_or_tol = rd.number(*it, "step_or_tol", "solver.step_or_tol");
      if (!(solver.step_or_tol > 0.0)) rd.fail("solver.step_or_tol", "must be > 0");
    }
    if (it->contains("t_end")) {
      solver.t_end = rd.number(*it, "t_end", "solver.t_end");
      if (!(solver.t_end > 0.0)) rd.fail("solver.t_end", "must be > 0");
    }
  }

  ScanConfig scan;
  if (auto it = doc.find("scan"); it != doc.end()) {
    if (!it->is_object()) rd.fail("scan", "must be an object");
    rd.only_keys(*it, {"grid_n", "exclusion", "n_brackets"}, "scan.");
    if (auto g = it->find("grid_n"); g != it->end()) {
      scan.grid_n = rd.positive_int(*g, "scan.grid_n", 8);
    }
    if (it->contains("exclusion")) {
      scan.exclusion = rd.number(*it, "exclusion", "scan.exclusion");
      if (!(*scan.exclusion > 0.0)) rd.fail("scan.exclusion", "must be > 0");
    }
    if (auto b = it->find("n_brackets"); b != it->end()) {
      scan.n_brackets = rd.positive_int(*b, "scan.n_brackets", 16);
    }
  }

  return ModelConfig{params, family, std::move(coefficients), std::move(*incidence), solver, scan};
}

ModelConfig load_config(const std::filesystem::path& path) {
  const std::string source = path.string();
  std::ifstream in(path);
  if (!in) throw ConfigError(source, "<file>", "cannot be opened for reading");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(source, "<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, source);
}

Json to_json(const ModelConfig& c) {
  Json coefficients = Json::object();
  for (const auto& [name, value] : c.coefficients) coefficients[name] = value;
  Json out{{"params", to_json(c.params)},
           {"incidence", Json{{"family", std::string(to_string(c.family))},
                              {"coefficients", std::move(coefficients)}}},
           {"solver", Json{{"method", std::string(to_string(c.solver.method))},
                           {"step_or_tol", c.solver.step_or_tol},
                           {"t_end", c.solver.t_end}}}};
  Json scan{{"n_brackets", c.scan.n_brackets}};
  if (c.scan.grid_n) scan["grid_n"] = *c.scan.grid_n;
  if (c.scan.exclusion) scan["exclusion"] = *c.scan.exclusion;
  out["scan"] = std::move(scan);
  return out;
}

ModelConfig example_config(double k) {
  Json doc{{"params", Json{{"Lambda", 10.0},
                           {"mu", 0.2},
                           {"gamma1", 0.2},
                           {"gamma2", 0.2},
                           {"alpha", 0.1},
                           {"delta", 0.1}}},
           {"incidence", Json{{"family", "power"}, {"coefficients", Json{{"k", k}, {"q", 2.0}}}}}};
  return parse_config(doc, "<built-in example>");
}

}  // namespace gsirs
