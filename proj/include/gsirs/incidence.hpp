#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gsirs {

/// Scalar map (S, I) -> value.
using ScalarField = std::function<double(double S, double I)>;

/// Named real coefficients of a built-in incidence family.
using Coefficients = std::map<std::string, double, std::less<>>;

enum class Family { bilinear, power, saturated_in_I, psi_ratio, ruan };

std::string_view to_string(Family family);
/// Throws InvalidArgument for unknown names.
Family parse_family(std::string_view name);

/// Analytic partial derivatives of the per-infective factor f1.
struct Partials {
  ScalarField df1_dS;
  ScalarField df1_dI;
};

/// Incidence rate f(S, I) = I * f1(S, I).
///
/// Immutable after construction; copies share the underlying callables, so a
/// value may be evaluated concurrently from several threads provided the
/// user-supplied callables are themselves thread-safe.
class IncidenceFunction {
 public:
  /// Builds an incidence from user callables. When `f1` is omitted it is
  /// derived as f / I for I > 0 and by extrapolation at I = 0. When
  /// `partials` is omitted, central differences of f1 are used.
  static IncidenceFunction custom(std::string label, ScalarField f,
                                  std::optional<ScalarField> f1 = std::nullopt,
                                  std::optional<Partials> partials = std::nullopt);

  double f(double S, double I) const { return impl_->f(S, I); }

  /// f1(S, I); at I = 0 returns the continuous extension lim_{I->0+} f/I.
  double f1(double S, double I) const;

  double df1_dS(double S, double I) const;
  double df1_dI(double S, double I) const;

  /// Central-difference partials at the given step, regardless of whether
  /// analytic partials are available.
  double fd_df1_dS(double S, double I, double step = 1e-5) const;
  double fd_df1_dI(double S, double I, double step = 1e-5) const;

  bool has_analytic_partials() const { return impl_->partials.has_value(); }
  /// True when f1(S, 0) is known in closed form rather than extrapolated.
  bool has_exact_f1() const { return impl_->f1.has_value(); }
  const std::string& label() const { return impl_->label; }
  std::optional<Family> family() const { return impl_->family; }

 private:
  struct Impl {
    std::string label;
    ScalarField f;
    std::optional<ScalarField> f1;
    std::optional<Partials> partials;
    std::optional<Family> family;
  };

  explicit IncidenceFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  friend IncidenceFunction make_builtin(Family, const Coefficients&);

  std::shared_ptr<const Impl> impl_;
};

/// Built-in literature families:
///   bilinear        f = beta S I                      {beta}
///   power           f = k I^p S^q                     {k, q, p = 1}
///   saturated_in_I  f = beta S I / (1 + a I)           {beta, a}
///   psi_ratio       f = beta S I / (1 + a I + b I^2)   {beta, a = 0, b = 0}
///   ruan            f = beta I^2 S / (1 + rho I^2)     {beta, rho}
/// Leading coefficients (beta, k) must be > 0, exponents > 0, the rest >= 0.
IncidenceFunction make_builtin(Family family, const Coefficients& coefficients);
IncidenceFunction make_builtin(std::string_view family, const Coefficients& coefficients);

struct Violation {
  std::string hypothesis;  // "H1", "H2" or "H3"
  double S = 0.0;
  double I = 0.0;
  double observed = 0.0;
};

struct SampleGrid {
  double S_max = 0.0;
  int grid_n = 0;
  double eps = 0.0;
};

struct HypothesisReport {
  bool h1_pass = true;
  bool h2_pass = true;
  bool h3_pass = true;
  std::vector<std::pair<double, double>> h3_limit_at;  // (S, lim f/I)
  std::vector<Violation> violations;
  // Boundary samples (S = 0 or I = 0) where the strict H2 sign condition
  // degenerates; informational only.
  int h2_boundary_degenerate = 0;
  SampleGrid grid;

  bool all_pass() const { return h1_pass && h2_pass && h3_pass; }
};

/// Samples H1-H3 on a grid_n x grid_n grid of [0, S_max]^2.
/// Throws EvaluationError if f or f1 is non-finite at a grid point.
HypothesisReport check_hypotheses(const IncidenceFunction& f, double S_max, int grid_n,
                                  double eps);

/// beta = (mu / Lambda) * df/dI(S0, 0) with S0 = Lambda / mu.
double compute_beta(const IncidenceFunction& f, double Lambda, double mu, double eps = 1e-4);

struct BoundCheck {
  bool pass = false;
  double min_slack = 0.0;
  double S_at = 0.0;  // location of the minimum slack
  double I_at = 0.0;
};

/// Checks f(S, I) <= (Lambda / mu) beta I on a grid of [0, S0]^2.
BoundCheck check_lemma1_bound(const IncidenceFunction& f, double Lambda, double mu,
                              int grid_n);

}  // namespace gsirs
