#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gsirs/errors.hpp"
#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"
#include "gsirs/report_json.hpp"
#include "gsirs/simulate.hpp"

namespace gsirs {

/// Malformed configuration. The message names the source, the key path and
/// the violated constraint.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string_view source, std::string_view key, std::string_view constraint);

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SolverConfig {
  Method method = Method::rk45_adaptive;
  double step_or_tol = 1e-8;
  double t_end = 500.0;
};

struct ScanConfig {
  std::optional<int> grid_n;
  std::optional<double> exclusion;
  int n_brackets = 256;
};

struct ModelConfig {
  ModelParams params;
  Family family;
  Coefficients coefficients;
  IncidenceFunction incidence;
  SolverConfig solver;
  ScanConfig scan;
};

/// Validates a config document:
///   {"params": {"Lambda", "mu", "gamma1", "gamma2", "alpha", "delta"},
///    "incidence": {"family": str, "coefficients": {name: real}},
///    "solver": {"method", "step_or_tol", "t_end"},        (optional)
///    "scan": {"grid_n", "exclusion", "n_brackets"}}       (optional)
/// Unknown keys are rejected at every level.
ModelConfig parse_config(const Json& doc, std::string_view source);
ModelConfig load_config(const std::filesystem::path& path);

Json to_json(const ModelConfig& c);

/// The two published parameter sets: Lambda = 10, mu = 0.2, gamma1 = gamma2 =
/// 0.2, alpha = delta = 0.1 with f = k I S^2.
ModelConfig example_config(double k);

}  // namespace gsirs
