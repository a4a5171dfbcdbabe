#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"

namespace gsirs {

// Grid-based certificates for global stability of the equilibria. A pass means
// "verified at the reported grid resolution", not an interval proof.

struct A1Check {
  bool pass = false;
  double lhs = 0.0;           // (2 mu + alpha)(mu + delta)
  double rhs = 0.0;           // mu gamma2
  double margin = 0.0;        // lhs - rhs
  double remark_value = 0.0;  // 2 mu^2 + (alpha + 2 delta - gamma2) mu + alpha delta
};

A1Check check_a1(const ModelParams& p);

/// G(u, v) = [f1(u, v) - f1(S*, I*)] / (u - S*).
/// Throws SingularPoint when |u - S*| < 1e-12.
double big_g(const IncidenceFunction& f, const State& eq, double u, double v);

/// h(u, v) = [2 mu + alpha - k1 G(u, v)]^2.
double h_value(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
               double u, double v);

struct A2Check {
  double sup_h = 0.0;
  double u_at = 0.0;  // location of sup_h
  double v_at = 0.0;
  double bound = 0.0;  // 2 mu (mu + alpha)
  bool divergence_flag = false;
  bool pass = false;
  int grid_n = 0;
  double exclusion = 0.0;
};

/// Samples h on a grid_n x grid_n grid of [0, Lambda/mu]^2 with the strip
/// |u - S*| < exclusion removed, plus three refinement offsets toward S*
/// (exclusion, /4, /16) on both sides. divergence_flag is set when |G| grows
/// more than tenfold across the refinement at some v.
/// `exclusion <= 0` selects the default 1e-4 Lambda/mu.
A2Check check_a2(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
                 int grid_n = 201, double exclusion = 0.0);

/// Golden-section search for the k1 minimising sup h over [1e-6, k_max].
/// Returns nullopt when the best k1 does not satisfy the strict inequality or
/// G diverges near S*.
std::optional<double> find_k1(const ModelParams& p, const IncidenceFunction& f,
                              const State& eq, int grid_n = 201);

/// k2 = (2 mu + alpha) / gamma2, which cancels the (I - I*)(R - R*) term.
/// Throws DegenerateParameter when gamma2 = 0.
double default_k2(const ModelParams& p);

/// V = 1/2 (dS + dI + dR)^2 + k1 (I - I* - I* ln(I/I*)) + k2/2 dR^2.
/// Throws DomainError for I <= 0.
double lyapunov_v(const State& eq, double k1, double k2, const State& x);

/// Closed-form gradient of lyapunov_v.
std::array<double, 3> lyapunov_gradient(const State& eq, double k1, double k2, const State& x);

/// dV/dt along the flow: grad V . vector_field.
double lyapunov_derivative(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                           double k1, double k2, const State& x);

/// Same quantity with V's gradient taken by central differences (step h).
double lyapunov_derivative_fd(const ModelParams& p, const IncidenceFunction& f,
                              const State& eq, double k1, double k2, const State& x, double h);

struct DvdtScan {
  double max_dvdt = 0.0;
  State at;
  std::size_t samples = 0;
  double k2 = 0.0;
};

/// Maximum of dV/dt on a grid_n^3 lattice over Omega with I > 0, skipping the
/// Euclidean ball of radius `ball` around eq.
DvdtScan dvdt_scan(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
                   std::optional<double> k2, int grid_n, double ball);

struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
};

struct PQMatrices {
  Sym2 P;
  Sym2 Q;
  std::array<double, 2> p_minors{};
  std::array<double, 2> q_minors{};
};

/// P = [[mu/2, mu], [mu, mu + k2 (mu + delta)]] and
/// Q = [[mu/2, c/2], [c/2, mu + alpha]] with c = 2 mu + alpha - k1 G(S, I).
PQMatrices pq_matrices(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                       double k1, double k2, double S, double I);

struct DfeBound {
  bool holds = false;
  double worst_slack = 0.0;
  double max_didt = 0.0;  // over samples with I > 0
  double S_at = 0.0;      // location of worst_slack
  double I_at = 0.0;
  std::size_t samples = 0;
};

/// Checks dI/dt <= (mu + gamma1 + gamma2 + alpha)(R0 - 1) I on a grid over the
/// (S, I) projection of Omega.
DfeBound dfe_lyapunov_bound(const ModelParams& p, const IncidenceFunction& f, int grid_n);

struct CertificateOptions {
  std::optional<double> k1;  // forced k1; searched when absent
  std::optional<double> k2;  // default_k2 when absent
  int grid_n = 201;
  double exclusion = 0.0;    // <= 0: 1e-4 Lambda/mu
  int dvdt_grid_n = 41;
  double ball = 0.0;         // <= 0: 1e-3 Lambda/mu
};

struct CertificateReport {
  A1Check a1;
  std::optional<double> k1;            // admissible k1 (forced or found)
  std::optional<double> k1_candidate;  // golden-section optimum, admissible or not
  bool k1_forced = false;
  std::optional<double> k2;
  std::optional<A2Check> a2;
  double h_bound = 0.0;
  std::optional<PQMatrices> pq;  // at the location of sup h
  std::optional<DvdtScan> dvdt;
  bool granted = false;
  std::vector<std::string> notes;
};

/// Runs the full endemic-equilibrium certificate pipeline.
CertificateReport certify(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                          const CertificateOptions& options = {});

}  // namespace gsirs
