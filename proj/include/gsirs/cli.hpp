#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsirs/config.hpp"

namespace gsirs::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kAnalysisFailure = 2,
  kSolverError = 3,
};

struct AnalyzeOptions {
  std::optional<double> k1;
  std::optional<double> k2;
  std::optional<int> grid_n;
};

struct CommandResult {
  Json report;
  int exit_code = kSuccess;
};

CommandResult check(const ModelConfig& config);
CommandResult analyze(const ModelConfig& config, const AnalyzeOptions& options = {});

/// Entry point shared by the executable and the tests; args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsirs::cli
