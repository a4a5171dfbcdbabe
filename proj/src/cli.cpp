#include "gsirs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "gsirs/equilibria.hpp"
#include "gsirs/errors.hpp"
#include "gsirs/simulate.hpp"
#include "gsirs/stability.hpp"

namespace gsirs::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kHypothesisEps = 1e-4;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kHypothesisGridDefault = 41;
constexpr int kCertificateGridDefault = 201;
constexpr int kDfeBoundGrid = 101;

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const BracketFailure*>(&e)) return "bracket_failure";
  if (dynamic_cast<const VerificationError*>(&e)) return "verification_error";
  if (dynamic_cast<const LimitFailure*>(&e)) return "limit_failure";
  if (dynamic_cast<const HypothesisViolation*>(&e)) return "hypothesis_violation";
  if (dynamic_cast<const EvaluationError*>(&e)) return "evaluation_error";
  if (dynamic_cast<const SingularPoint*>(&e)) return "singular_point";
  if (dynamic_cast<const DegenerateParameter*>(&e)) return "degenerate_parameter";
  if (dynamic_cast<const InvarianceViolation*>(&e)) return "invariance_violation";
  if (dynamic_cast<const BlowUp*>(&e)) return "blow_up";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  return "internal_error";
}

Json error_entry(std::string_view stage, const std::exception& e) {
  Json j{{"stage", stage}, {"kind", error_kind(e)}, {"message", e.what()}};
  if (const auto* bf = dynamic_cast<const BracketFailure*>(&e)) {
    Json samples = Json::array();
    for (const auto& [I, g] : bf->samples()) samples.push_back(Json::array({I, g}));
    j["g_samples"] = std::move(samples);
  }
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  f << text;
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
  std::ostringstream os;
  write_csv(os, traj);
  write_text(path, os.str());
}

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = dump_json(report);
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

State parse_state(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw InvalidArgument("--initial: '" + item + "' is not a finite number");
    }
    values.push_back(v);
  }
  if (values.size() != 3) throw InvalidArgument("--initial: expected three values S,I,R");
  return {values[0], values[1], values[2]};
}

void require_in_omega(const ModelParams& p, const State& x) {
  std::ostringstream os;
  os.precision(17);
  if (x.S < 0.0 || x.I < 0.0 || x.R < 0.0) {
    os << "initial state violates S, I, R >= 0";
    throw DomainError(os.str());
  }
  if (x.total() > p.S0()) {
    os << "initial state violates S + I + R <= Lambda/mu: " << x.total() << " > " << p.S0();
    throw DomainError(os.str());
  }
}

struct Target {
  State state;
  bool endemic = false;
};

std::optional<Target> attractor(const ModelConfig& c) {
  try {
    const auto eq = find_endemic(c.params, c.incidence, 1e-10, c.scan.n_brackets);
    if (eq.r0 > 1.0 && !eq.endemic.empty()) return Target{eq.endemic.front().state, true};
    return Target{eq.dfe, false};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CommandResult check(const ModelConfig& config) {
  const auto rep = check_hypotheses(config.incidence, config.params.S0(),
                                    config.scan.grid_n.value_or(kHypothesisGridDefault),
                                    kHypothesisEps);
  Json j{{"incidence", config.incidence.label()}};
  const Json body = to_json(rep);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return {std::move(j), rep.all_pass() ? kSuccess : kAnalysisFailure};
}

CommandResult analyze(const ModelConfig& config, const AnalyzeOptions& options) {
  const ModelParams& p = config.params;
  const IncidenceFunction& f = config.incidence;
  Json rep{{"incidence", f.label()}, {"params", to_json(p)}};
  Json errors = Json::array();
  int code = kSuccess;

  try {
    const auto hyp = check_hypotheses(f, p.S0(), config.scan.grid_n.value_or(kHypothesisGridDefault),
                                      kHypothesisEps);
    rep["hypotheses"] = Json{{"h1_pass", hyp.h1_pass},
                             {"h2_pass", hyp.h2_pass},
                             {"h3_pass", hyp.h3_pass},
                             {"all_pass", hyp.all_pass()},
                             {"violation_count", hyp.violations.size()}};
    if (!hyp.all_pass()) {
      rep["errors"] = std::move(errors);
      return {std::move(rep), kAnalysisFailure};
    }
  } catch (const Error& e) {
    errors.push_back(error_entry("hypotheses", e));
    rep["errors"] = std::move(errors);
    return {std::move(rep), kSolverError};
  }

  double r0_value = 0.0;
  try {
    const double beta = compute_beta(f, p.Lambda(), p.mu());
    r0_value = r0_from_beta(p, beta);
    rep["beta"] = beta;
    rep["r0"] = r0_value;
    rep["dfe"] = to_json(dfe(p));
    rep["dfe_certificate"] = Json{{"r0_at_most_one", r0_value <= 1.0},
                                  {"lemma1", to_json(check_lemma1_bound(f, p.Lambda(), p.mu(), kDfeBoundGrid))},
                                  {"didt_bound", to_json(dfe_lyapunov_bound(p, f, kDfeBoundGrid))}};
  } catch (const Error& e) {
    errors.push_back(error_entry("r0", e));
    rep["errors"] = std::move(errors);
    return {std::move(rep), kSolverError};
  }

  std::optional<EquilibriumReport> eq;
  try {
    eq = find_endemic(p, f, 1e-10, config.scan.n_brackets);
    rep["equilibria"] = to_json(*eq);
  } catch (const Error& e) {
    errors.push_back(error_entry("equilibria", e));
  }

  if (eq && eq->r0 > 1.0 && !eq->endemic.empty()) {
    try {
      CertificateOptions copt;
      copt.k1 = options.k1;
      copt.k2 = options.k2;
      copt.grid_n = options.grid_n.value_or(config.scan.grid_n.value_or(kCertificateGridDefault));
      copt.exclusion = config.scan.exclusion.value_or(0.0);
      const auto cert = certify(p, f, eq->endemic.front().state, copt);
      rep["certificates"] = to_json(cert);
      if (!cert.granted) code = kAnalysisFailure;
    } catch (const Error& e) {
      errors.push_back(error_entry("certificates", e));
    }
  }

  if (!errors.empty()) code = kSolverError;
  rep["errors"] = std::move(errors);
  return {std::move(rep), code};
}

namespace {

int cmd_simulate(const ModelConfig& c, const std::string& initial, std::optional<double> t_end,
                 const std::string& out_path, std::ostream& out) {
  const State x0 = parse_state(initial);
  require_in_omega(c.params, x0);
  const double horizon = t_end.value_or(c.solver.t_end);
  const auto traj =
      integrate(c.params, c.incidence, x0, horizon, c.solver.method, c.solver.step_or_tol);
  if (!out_path.empty()) write_trajectory(out_path, traj);

  Json summary{{"initial", to_json(x0)},
               {"t_end", horizon},
               {"method", std::string(to_string(c.solver.method))},
               {"step_or_tol", c.solver.step_or_tol},
               {"points", traj.times.size()},
               {"final", to_json(traj.final_state())},
               {"step_stats", to_json(traj.step_stats)}};
  if (const auto target = attractor(c)) {
    summary["target"] = to_json(target->state);
    summary["target_kind"] = target->endemic ? "endemic" : "dfe";
    summary["distance"] = max_norm_distance(traj.final_state(), target->state);
  } else {
    summary["target"] = nullptr;
  }
  out << dump_json(summary);
  return kSuccess;
}

int cmd_sweep(const ModelConfig& c, int lattice, std::optional<double> t_end, double conv_tol,
              const std::string& out_dir, std::size_t csv_points, std::ostream& out) {
  if (lattice < 2) throw InvalidArgument("--lattice must be >= 2");
  const double horizon = t_end.value_or(c.solver.t_end);
  const auto initials = omega_lattice(c.params, lattice);
  const auto rep = sweep(c.params, c.incidence, initials, horizon, conv_tol,
                         out_dir.empty() ? 0 : csv_points);
  const Json j = to_json(rep);
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_text(dir / "sweep_report.json", dump_json(j));
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      if (!rep.runs[i].trajectory) continue;
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu.csv", i);
      write_trajectory(dir / name, *rep.runs[i].trajectory);
    }
  }
  out << dump_json(j);
  return rep.converged_fraction == 1.0 ? kSuccess : kAnalysisFailure;
}

struct Check {
  std::string quantity;
  double expected;
  double observed;
  double tolerance;
  bool pass;
};

int cmd_reproduce(const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<Check> checks;
  auto near = [&](std::string q, double expected, double observed, double tol) {
    checks.push_back({std::move(q), expected, observed, tol, std::abs(observed - expected) <= tol});
  };
  auto below = [&](std::string q, double limit, double observed) {
    checks.push_back({std::move(q), limit, observed, 0.0, observed < limit});
  };

  const auto low = example_config(0.0002);
  const auto high = example_config(0.0008);
  write_text(dir / "config_r0_below_one.json", dump_json(to_json(low)));
  write_text(dir / "config_r0_above_one.json", dump_json(to_json(high)));

  const auto low_an = analyze(low);
  const auto high_an = analyze(high);
  AnalyzeOptions forced;
  forced.k1 = 7.0;
  const auto forced_an = analyze(high, forced);
  write_text(dir / "analysis_r0_below_one.json", dump_json(low_an.report));
  write_text(dir / "analysis_r0_above_one.json", dump_json(high_an.report));
  write_text(dir / "analysis_r0_above_one_k1_7.json", dump_json(forced_an.report));

  near("r0 (k = 0.0002)", 0.7143, low_an.report.value("r0", kNaN), 1e-4);
  near("r0 (k = 0.0008)", 2.8571, high_an.report.value("r0", kNaN), 1e-4);
  const auto low_eq = find_endemic(low.params, low.incidence);
  near("endemic equilibria count (k = 0.0002)", 0.0, static_cast<double>(low_eq.endemic.size()), 0.0);
  const auto high_eq = find_endemic(high.params, high.incidence);
  near("endemic equilibria count (k = 0.0008)", 1.0, static_cast<double>(high_eq.endemic.size()), 0.0);
  const State e1 = high_eq.endemic.at(0).state;
  near("E1.S", 29.5804, e1.S, 1e-3);
  near("E1.I", 9.4244, e1.I, 1e-3);
  near("E1.R", 6.2830, e1.R, 1e-3);
  const auto a1 = check_a1(high.params);
  near("A1 lhs (2mu+alpha)(mu+delta)", 0.15, a1.lhs, 1e-12);
  near("A1 rhs mu*gamma2", 0.04, a1.rhs, 1e-12);

  // h(u) with k1 = 7 on u in [0, 50].
  const double k1 = 7.0;
  std::ostringstream hcsv;
  hcsv << "u,h\n";
  double h_max = -INFINITY;
  char line[96];
  for (int i = 0; i <= 500; ++i) {
    const double u = 50.0 * i / 500.0;
    if (std::abs(u - e1.S) < 1e-12) continue;
    const double h = h_value(high.params, high.incidence, e1, k1, u, e1.I);
    h_max = std::max(h_max, h);
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", u, h);
    hcsv << line;
  }
  write_text(dir / "h_of_u.csv", hcsv.str());
  below("max h(u), k1 = 7, u in [0, 50]", 0.12, h_max);

  const std::vector<State> initials{{30, 10, 5}, {10, 30, 5}, {45, 2, 1}, {5, 5, 35}};
  for (std::size_t i = 0; i < initials.size(); ++i) {
    char name[48];
    const auto t2 = integrate(low.params, low.incidence, initials[i], 500.0,
                              Method::rk45_adaptive, 1e-8);
    std::snprintf(name, sizeof name, "fig2_run%zu.csv", i);
    write_trajectory(dir / name, t2);
    below("fig2 run " + std::to_string(i) + " distance to E0", 1e-2,
          max_norm_distance(t2.final_state(), dfe(low.params)));
    const auto t3 = integrate(high.params, high.incidence, initials[i], 500.0,
                              Method::rk45_adaptive, 1e-8);
    std::snprintf(name, sizeof name, "fig3_run%zu.csv", i);
    write_trajectory(dir / name, t3);
    below("fig3 run " + std::to_string(i) + " distance to E1", 1e-2,
          max_norm_distance(t3.final_state(), e1));
  }

  Json list = Json::array();
  Json failed = Json::array();
  for (const auto& c : checks) {
    Json j{{"quantity", c.quantity},
           {"expected", c.expected},
           {"observed", c.observed},
           {"tolerance", c.tolerance},
           {"pass", c.pass}};
    if (!c.pass) failed.push_back(j);
    list.push_back(std::move(j));
  }
  const bool all = failed.empty();
  Json summary{{"all_pass", all},
               {"checks", std::move(list)},
               {"failed", failed},
               {"notes", Json::array({"trajectory initial conditions and t_end = 500 are "
                                      "toolkit choices; the published figures do not state them"})}};
  write_text(dir / "summary.json", dump_json(summary));
  out << dump_json(summary);
  for (const auto& f : failed) {
    err << "reproduce: " << f["quantity"].get<std::string>() << ": expected "
        << f["expected"].get<double>() << ", observed " << f["observed"].get<double>() << "\n";
  }
  return all ? kSuccess : kAnalysisFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized SIRS model analysis: R0, equilibria, stability certificates, "
               "simulation",
               "gsirs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  AnalyzeOptions an_opts;
  std::string initial;
  std::optional<double> t_end;
  int lattice = 2;
  double conv_tol = 1e-2;
  std::size_t csv_points = 1000;

  auto* check_cmd = app.add_subcommand("check", "Check hypotheses H1-H3 for the incidence");
  check_cmd->add_option("config", config_path, "Model config JSON")->required();
  check_cmd->add_option("--out", out_path, "Write the report to this file");

  auto* analyze_cmd = app.add_subcommand("analyze", "R0, equilibria and stability certificates");
  analyze_cmd->add_option("config", config_path, "Model config JSON")->required();
  analyze_cmd->add_option("--k1", an_opts.k1, "Force k1 instead of searching");
  analyze_cmd->add_option("--k2", an_opts.k2, "Override k2 = (2 mu + alpha)/gamma2");
  analyze_cmd->add_option("--grid-n", an_opts.grid_n, "Certificate grid points per axis")
      ->check(CLI::Range(2, 100000));
  analyze_cmd->add_option("--out", out_path, "Write the report to this file");

  auto* sim_cmd = app.add_subcommand("simulate", "Integrate one trajectory");
  sim_cmd->add_option("config", config_path, "Model config JSON")->required();
  sim_cmd->add_option("--initial", initial, "Initial state S,I,R")->required();
  sim_cmd->add_option("--t-end", t_end, "Final time");
  sim_cmd->add_option("--out", out_path, "Trajectory CSV path");

  auto* sweep_cmd = app.add_subcommand("sweep", "Integrate a lattice of initial states");
  sweep_cmd->add_option("config", config_path, "Model config JSON")->required();
  sweep_cmd->add_option("--lattice", lattice, "Lattice points per axis (n^3 runs)");
  sweep_cmd->add_option("--t-end", t_end, "Final time");
  sweep_cmd->add_option("--conv-tol", conv_tol, "Convergence distance (max-norm)");
  sweep_cmd->add_option("--csv-points", csv_points, "Samples kept per run CSV");
  sweep_cmd->add_option("--out", out_path, "Output directory for report and run CSVs");

  auto* repro_cmd = app.add_subcommand("reproduce", "Regenerate the worked example artifacts");
  repro_cmd->add_option("--out", out_path, "Output directory")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "gsirs: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*repro_cmd) return cmd_reproduce(out_path, out, err);

    const ModelConfig config = load_config(config_path);
    if (*check_cmd) {
      const auto r = check(config);
      emit(r.report, out_path, out);
      return r.exit_code;
    }
    if (*analyze_cmd) {
      const auto r = analyze(config, an_opts);
      emit(r.report, out_path, out);
      return r.exit_code;
    }
    if (*sim_cmd) return cmd_simulate(config, initial, t_end, out_path, out);
    if (*sweep_cmd) {
      return cmd_sweep(config, lattice, t_end, conv_tol, out_path, csv_points, out);
    }
  } catch (const InvalidArgument& e) {
    err << "gsirs: error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "gsirs: error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "gsirs: solver error (" << error_kind(e) << "): " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    err << "gsirs: internal error: " << e.what() << "\n";
    return kSolverError;
  }
  return kInputError;
}

}  // namespace gsirs::cli
