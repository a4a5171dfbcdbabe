#include "gsirs/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gsirs/errors.hpp"
#include "gsirs/numerics.hpp"

namespace gsirs {
namespace {

constexpr double kSingularGap = 1e-12;
constexpr double kDivergenceGrowth = 10.0;

double default_exclusion(const ModelParams& p, double exclusion) {
  return exclusion > 0.0 ? exclusion : 1e-4 * p.S0();
}

struct GSample {
  double u;
  double v;
  double G;
};

struct GSamples {
  std::vector<GSample> points;
  bool divergence = false;
  double max_abs_g = 0.0;
};

// G on the scan grid plus the refinement offsets toward u = S*.
GSamples sample_g(const ModelParams& p, const IncidenceFunction& f, const State& eq, int grid_n,
                  double exclusion) {
  if (grid_n < 2) throw InvalidArgument("certificate scan: grid_n must be >= 2");
  const double S0 = p.S0();
  const auto n = static_cast<std::size_t>(grid_n);
  GSamples out;
  out.points.reserve(n * n + 6 * n);

  auto eval = [&](double u, double v) {
    const double G = big_g(f, eq, u, v);
    if (!std::isfinite(G)) {
      std::ostringstream os;
      os.precision(17);
      os << "non-finite G at (u=" << u << ", v=" << v << ")";
      throw EvaluationError(os.str());
    }
    return G;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double u = numerics::grid_point(0.0, S0, i, n);
    if (std::abs(u - eq.S) < exclusion) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = numerics::grid_point(0.0, S0, j, n);
      const double G = eval(u, v);
      out.points.push_back({u, v, G});
      out.max_abs_g = std::max(out.max_abs_g, std::abs(G));
    }
  }

  const std::array<double, 3> offsets{exclusion, exclusion / 4.0, exclusion / 16.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double v = numerics::grid_point(0.0, S0, j, n);
    for (double side : {-1.0, 1.0}) {
      if (eq.S + side * offsets[0] < 0.0 || eq.S + side * offsets[0] > S0) continue;
      std::array<double, 3> g{};
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const double u = eq.S + side * offsets[k];
        g[k] = eval(u, v);
        out.points.push_back({u, v, g[k]});
      }
      if (std::abs(g[2]) > kDivergenceGrowth * std::abs(g[0]) && std::abs(g[2]) > 1e-12) {
        out.divergence = true;
      }
    }
  }
  return out;
}

A2Check evaluate_a2(const ModelParams& p, const GSamples& samples, double k1, int grid_n,
                    double exclusion) {
  const double c0 = 2.0 * p.mu() + p.alpha();
  A2Check out;
  out.bound = 2.0 * p.mu() * (p.mu() + p.alpha());
  out.grid_n = grid_n;
  out.exclusion = exclusion;
  out.divergence_flag = samples.divergence;
  out.sup_h = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples.points) {
    const double t = c0 - k1 * s.G;
    const double h = t * t;
    if (h > out.sup_h) {
      out.sup_h = h;
      out.u_at = s.u;
      out.v_at = s.v;
    }
  }
  out.pass = out.sup_h < out.bound && !out.divergence_flag;
  return out;
}

struct K1Search {
  double k1 = 0.0;
  A2Check a2;
  bool admissible = false;
};

std::optional<K1Search> search_k1(const ModelParams& p, const IncidenceFunction& f,
                                  const State& eq, int grid_n, double exclusion) {
  const auto samples = sample_g(p, f, eq, grid_n, exclusion);
  if (!(samples.max_abs_g > 0.0)) return std::nullopt;
  const double c0 = 2.0 * p.mu() + p.alpha();
  // Beyond k_max the bracketed term has flipped sign at every sample.
  const double k_max = 2.0 * c0 / samples.max_abs_g;
  const double k_min = 1e-6;
  if (!(k_max > k_min)) return std::nullopt;
  auto sup_h = [&](double k) { return evaluate_a2(p, samples, k, grid_n, exclusion).sup_h; };
  const auto best = numerics::golden_section_minimize(sup_h, k_min, k_max, 1e-10 * k_max);
  K1Search out;
  out.k1 = best.x;
  out.a2 = evaluate_a2(p, samples, best.x, grid_n, exclusion);
  out.admissible = out.a2.pass;
  return out;
}

}  // namespace

A1Check check_a1(const ModelParams& p) {
  const double mu = p.mu();
  const double alpha = p.alpha();
  const double delta = p.delta();
  const double gamma2 = p.gamma2();
  A1Check out;
  out.lhs = (2.0 * mu + alpha) * (mu + delta);
  out.rhs = mu * gamma2;
  out.margin = out.lhs - out.rhs;
  out.remark_value = 2.0 * mu * mu + (alpha + 2.0 * delta - gamma2) * mu + alpha * delta;
  out.pass = out.lhs > out.rhs;
  return out;
}

double big_g(const IncidenceFunction& f, const State& eq, double u, double v) {
  const double gap = u - eq.S;
  if (std::abs(gap) < kSingularGap) {
    std::ostringstream os;
    os.precision(17);
    os << "G is singular at u = S* = " << eq.S;
    throw SingularPoint(os.str());
  }
  return (f.f1(u, v) - f.f1(eq.S, eq.I)) / gap;
}

double h_value(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
               double u, double v) {
  const double t = 2.0 * p.mu() + p.alpha() - k1 * big_g(f, eq, u, v);
  return t * t;
}

A2Check check_a2(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
                 int grid_n, double exclusion) {
  if (!(k1 >= 0.0)) throw InvalidArgument("check_a2: k1 must be >= 0");
  exclusion = default_exclusion(p, exclusion);
  const auto samples = sample_g(p, f, eq, grid_n, exclusion);
  return evaluate_a2(p, samples, k1, grid_n, exclusion);
}

std::optional<double> find_k1(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                              int grid_n) {
  const auto found = search_k1(p, f, eq, grid_n, default_exclusion(p, 0.0));
  if (!found || !found->admissible) return std::nullopt;
  return found->k1;
}

double default_k2(const ModelParams& p) {
  if (!(p.gamma2() > 0.0)) {
    throw DegenerateParameter(
        "k2 = (2 mu + alpha) / gamma2 is undefined for gamma2 = 0; supply k2 explicitly");
  }
  return (2.0 * p.mu() + p.alpha()) / p.gamma2();
}

double lyapunov_v(const State& eq, double k1, double k2, const State& x) {
  if (!(x.I > 0.0) || !(eq.I > 0.0)) {
    throw DomainError("lyapunov_v: requires I > 0 and I* > 0");
  }
  const double dS = x.S - eq.S;
  const double dI = x.I - eq.I;
  const double dR = x.R - eq.R;
  const double sum = dS + dI + dR;
  return 0.5 * sum * sum + k1 * (dI - eq.I * std::log(x.I / eq.I)) + 0.5 * k2 * dR * dR;
}

std::array<double, 3> lyapunov_gradient(const State& eq, double k1, double k2, const State& x) {
  if (!(x.I > 0.0)) throw DomainError("lyapunov_gradient: requires I > 0");
  const double sum = (x.S - eq.S) + (x.I - eq.I) + (x.R - eq.R);
  return {sum, sum + k1 * (1.0 - eq.I / x.I), sum + k2 * (x.R - eq.R)};
}

double lyapunov_derivative(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                           double k1, double k2, const State& x) {
  const auto grad = lyapunov_gradient(eq, k1, k2, x);
  const auto F = vector_field(p, f, x);
  return grad[0] * F.dS + grad[1] * F.dI + grad[2] * F.dR;
}

double lyapunov_derivative_fd(const ModelParams& p, const IncidenceFunction& f,
                              const State& eq, double k1, double k2, const State& x, double h) {
  auto V = [&](State y) { return lyapunov_v(eq, k1, k2, y); };
  auto partial = [&](double State::*member) {
    return numerics::derivative(
        [&](double value) {
          State y = x;
          y.*member = value;
          return V(y);
        },
        x.*member, h, member == &State::I ? 0.0 : -INFINITY);
  };
  const auto F = vector_field(p, f, x);
  return partial(&State::S) * F.dS + partial(&State::I) * F.dI + partial(&State::R) * F.dR;
}

DvdtScan dvdt_scan(const ModelParams& p, const IncidenceFunction& f, const State& eq, double k1,
                   std::optional<double> k2, int grid_n, double ball) {
  if (grid_n < 2) throw InvalidArgument("dvdt_scan: grid_n must be >= 2");
  DvdtScan out;
  out.k2 = k2 ? *k2 : default_k2(p);
  out.max_dvdt = -std::numeric_limits<double>::infinity();
  const double S0 = p.S0();
  const auto n = static_cast<std::size_t>(grid_n);
  for (std::size_t i = 0; i < n; ++i) {
    const double S = numerics::grid_point(0.0, S0, i, n);
    for (std::size_t j = 1; j < n; ++j) {
      const double I = numerics::grid_point(0.0, S0, j, n);
      if (S + I > S0) break;
      for (std::size_t k = 0; k < n; ++k) {
        const double R = numerics::grid_point(0.0, S0, k, n);
        if (S + I + R > S0) break;
        const State x{S, I, R};
        const double dist = std::hypot(S - eq.S, I - eq.I, R - eq.R);
        if (dist < ball) continue;
        const double d = lyapunov_derivative(p, f, eq, k1, out.k2, x);
        ++out.samples;
        if (d > out.max_dvdt) {
          out.max_dvdt = d;
          out.at = x;
        }
      }
    }
  }
  return out;
}

PQMatrices pq_matrices(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                       double k1, double k2, double S, double I) {
  const double mu = p.mu();
  const double c = 2.0 * mu + p.alpha() - k1 * big_g(f, eq, S, I);
  PQMatrices out;
  out.P = {mu / 2.0, mu, mu + k2 * (mu + p.delta())};
  out.Q = {mu / 2.0, c / 2.0, mu + p.alpha()};
  out.p_minors = {out.P.a11, out.P.det()};
  out.q_minors = {out.Q.a11, out.Q.det()};
  return out;
}

DfeBound dfe_lyapunov_bound(const ModelParams& p, const IncidenceFunction& f, int grid_n) {
  if (grid_n < 2) throw InvalidArgument("dfe_lyapunov_bound: grid_n must be >= 2");
  const double beta = compute_beta(f, p.Lambda(), p.mu());
  const double exit_rate = p.infective_exit_rate();
  const double coeff = exit_rate * (r0_from_beta(p, beta) - 1.0);
  const double S0 = p.S0();
  const auto n = static_cast<std::size_t>(grid_n);

  DfeBound out;
  out.holds = true;
  out.worst_slack = std::numeric_limits<double>::infinity();
  out.max_didt = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double S = numerics::grid_point(0.0, S0, i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double I = numerics::grid_point(0.0, S0, j, n);
      if (S + I > S0) break;
      const double didt = vector_field(p, f, {S, I, 0.0}).dI;
      const double bound = coeff * I;
      const double slack = bound - didt;
      ++out.samples;
      if (slack < -1e-10 * std::max(1.0, std::abs(bound))) out.holds = false;
      if (slack < out.worst_slack) {
        out.worst_slack = slack;
        out.S_at = S;
        out.I_at = I;
      }
      if (I > 0.0) out.max_didt = std::max(out.max_didt, didt);
    }
  }
  return out;
}

CertificateReport certify(const ModelParams& p, const IncidenceFunction& f, const State& eq,
                          const CertificateOptions& options) {
  CertificateReport rep;
  rep.a1 = check_a1(p);
  rep.h_bound = 2.0 * p.mu() * (p.mu() + p.alpha());
  const double exclusion = default_exclusion(p, options.exclusion);
  const double ball = options.ball > 0.0 ? options.ball : 1e-3 * p.S0();

  if (options.k2) {
    rep.k2 = options.k2;
  } else if (p.gamma2() > 0.0) {
    rep.k2 = default_k2(p);
  } else {
    rep.notes.push_back("gamma2 = 0: default k2 undefined; supply k2 to scan dV/dt");
  }

  std::optional<double> k_eval;
  if (options.k1) {
    rep.k1_forced = true;
    k_eval = options.k1;
    rep.a2 = check_a2(p, f, eq, *options.k1, options.grid_n, exclusion);
    if (rep.a2->pass) rep.k1 = options.k1;
  } else if (auto found = search_k1(p, f, eq, options.grid_n, exclusion)) {
    k_eval = found->k1;
    rep.k1_candidate = found->k1;
    rep.a2 = found->a2;
    if (found->admissible) rep.k1 = found->k1;
  } else {
    rep.notes.push_back("G vanishes identically on the scan grid; no k1 search possible");
  }

  if (rep.a2 && k_eval && rep.k2) {
    rep.pq = pq_matrices(p, f, eq, *k_eval, *rep.k2, rep.a2->u_at, rep.a2->v_at);
  }
  if (k_eval && rep.k2) {
    rep.dvdt = dvdt_scan(p, f, eq, *k_eval, rep.k2, options.dvdt_grid_n, ball);
  }

  rep.granted = rep.a1.pass && rep.k1.has_value() && rep.a2 && rep.a2->sup_h < rep.h_bound &&
                !rep.a2->divergence_flag;
  if (p.gamma2() == 0.0) {
    // Without the k2 cancellation only the sampled dV/dt sign can certify.
    rep.granted = rep.granted && rep.dvdt && rep.dvdt->max_dvdt < 0.0;
  }
  return rep;
}

}  // namespace gsirs
