#pragma once

#include <optional>
#include <vector>

#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"

namespace gsirs {

/// Coefficient c of the line S = Lambda/mu - (c/mu) I on which every
/// equilibrium with R = gamma2 I / (mu + delta) lies.
double q1_slope_factor(const ModelParams& p);

/// S on the equilibrium line at the given I.
double line_q1(const ModelParams& p, double I);

/// I-axis intercept of the equilibrium line, Lambda / c.
double q1_intercept(const ModelParams& p);

struct EndemicPoint {
  State state;
  double residual = 0.0;  // max-norm of the vector field
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double g_lo = 0.0;
  double g_hi = 0.0;
};

struct EquilibriumReport {
  State dfe;
  std::vector<EndemicPoint> endemic;  // sorted by I ascending
  double r0 = 0.0;
  double beta = 0.0;
  double I0 = 0.0;
  std::optional<double> S_star_curve;  // level set f1 = exit rate at I -> 0+
  std::vector<Bracket> bracket_log;
};

/// Locates endemic equilibria as roots of
///   g(I) = f1(line_q1(I), I) - (mu + gamma1 + gamma2 + alpha)
/// on (eps, I0 - eps). Roots are bracketed on n_brackets uniform cells,
/// bisected to width tol and checked against the vector field.
///
/// Throws BracketFailure when R0 > 1 and no sign change exists, and
/// VerificationError when a root's residual is >= 10 tol.
EquilibriumReport find_endemic(const ModelParams& p, const IncidenceFunction& f,
                               double tol = 1e-10, int n_brackets = 256);

/// Max-norm of the vector field at x.
double verify_equilibrium(const ModelParams& p, const IncidenceFunction& f, const State& x);

}  // namespace gsirs
