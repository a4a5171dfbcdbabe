#pragma once

#include <string>

#include "gsirs/incidence.hpp"

namespace gsirs {

/// Rates of the SIRS system
///   S' = Lambda - mu S - f(S, I) + gamma1 I + delta R
///   I' = f(S, I) - (mu + gamma1 + gamma2 + alpha) I
///   R' = gamma2 I - (mu + delta) R
class ModelParams {
 public:
  /// Throws InvalidArgument unless Lambda, mu > 0 and the rest are >= 0.
  ModelParams(double Lambda, double mu, double gamma1, double gamma2, double alpha,
              double delta);

  double Lambda() const { return Lambda_; }
  double mu() const { return mu_; }
  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  /// Susceptible level at the disease-free equilibrium, Lambda / mu.
  double S0() const { return Lambda_ / mu_; }
  /// Per-capita exit rate from the infected class, mu + gamma1 + gamma2 + alpha.
  double infective_exit_rate() const { return mu_ + gamma1_ + gamma2_ + alpha_; }

  std::string describe() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double Lambda_;
  double mu_;
  double gamma1_;
  double gamma2_;
  double alpha_;
  double delta_;
};

struct State {
  double S = 0.0;
  double I = 0.0;
  double R = 0.0;

  double total() const { return S + I + R; }
  friend bool operator==(const State&, const State&) = default;
};

struct Derivative {
  double dS = 0.0;
  double dI = 0.0;
  double dR = 0.0;

  double sum() const { return dS + dI + dR; }
  double max_abs() const;
};

/// Right-hand side of the system. Throws DomainError for negative components
/// and EvaluationError for a non-finite incidence value.
Derivative vector_field(const ModelParams& p, const IncidenceFunction& f, const State& x);

/// Same as vector_field without the sign precondition (used inside
/// integrator stages, where transient round-off below zero is expected).
Derivative vector_field_unchecked(const ModelParams& p, const IncidenceFunction& f,
                                  const State& x);

/// Disease-free equilibrium (Lambda / mu, 0, 0).
State dfe(const ModelParams& p);

/// R0 = Lambda beta / (mu (mu + gamma1 + gamma2 + alpha)).
double r0(const ModelParams& p, const IncidenceFunction& f, double eps = 1e-4);
double r0_from_beta(const ModelParams& p, double beta);

/// Membership in {S, I, R >= -tol, S + I + R <= Lambda / mu + tol}.
bool in_omega(const ModelParams& p, const State& x, double tol = 1e-9);

double max_norm_distance(const State& a, const State& b);

}  // namespace gsirs
