#include "gsirs/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsirs/errors.hpp"
#include "gsirs/numerics.hpp"

namespace gsirs {
namespace {

// Offset from I = 0 at which the level curve f1 = exit rate is probed.
constexpr double kCurveProbeI = 1e-8;

std::optional<double> level_curve_intercept(const ModelParams& p, const IncidenceFunction& f) {
  const double target = p.infective_exit_rate();
  auto h = [&](double S) { return f.f1(S, kCurveProbeI) - target; };
  const double lo = 0.0;
  const double hi = 10.0 * p.S0();
  const double h_lo = h(lo);
  const double h_hi = h(hi);
  if (!std::isfinite(h_lo) || !std::isfinite(h_hi)) return std::nullopt;
  if (h_lo == 0.0) return lo;
  if ((h_lo > 0.0) == (h_hi > 0.0)) return std::nullopt;
  return numerics::bisect(h, lo, hi, 1e-12 * p.S0());
}

}  // namespace

double q1_slope_factor(const ModelParams& p) {
  return p.mu() + p.gamma2() + p.alpha() - p.delta() * p.gamma2() / (p.mu() + p.delta());
}

double line_q1(const ModelParams& p, double I) {
  return p.S0() - q1_slope_factor(p) * I / p.mu();
}

double q1_intercept(const ModelParams& p) { return p.Lambda() / q1_slope_factor(p); }

EquilibriumReport find_endemic(const ModelParams& p, const IncidenceFunction& f, double tol,
                               int n_brackets) {
  if (!(tol > 0.0)) throw InvalidArgument("find_endemic: tol must be > 0");
  if (n_brackets < 16) throw InvalidArgument("find_endemic: n_brackets must be >= 16");

  EquilibriumReport rep;
  rep.dfe = dfe(p);
  rep.beta = compute_beta(f, p.Lambda(), p.mu());
  rep.r0 = r0_from_beta(p, rep.beta);
  rep.I0 = q1_intercept(p);
  rep.S_star_curve = level_curve_intercept(p, f);

  // No endemic equilibrium exists at or below the threshold.
  if (rep.r0 <= 1.0) return rep;

  const double exit_rate = p.infective_exit_rate();
  auto g = [&](double I) {
    const double S = line_q1(p, I);
    const double v = f.f1(S, I) - exit_rate;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "non-finite f1 at (S=" << S << ", I=" << I << ") while scanning for equilibria";
      throw EvaluationError(os.str());
    }
    return v;
  };

  const double edge = 1e-9 * rep.I0;
  const double lo = edge;
  const double hi = rep.I0 - edge;
  const auto nodes = static_cast<std::size_t>(n_brackets) + 1;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double I = numerics::grid_point(lo, hi, k, nodes);
    samples.emplace_back(I, g(I));
  }

  std::vector<double> roots;
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto [I, gv] = samples[k];
    if (gv == 0.0) {
      rep.bracket_log.push_back({I, I, gv, gv});
      roots.push_back(I);
      continue;
    }
    if (k + 1 == nodes) break;
    const auto [I_next, g_next] = samples[k + 1];
    if (g_next != 0.0 && (gv > 0.0) != (g_next > 0.0)) {
      rep.bracket_log.push_back({I, I_next, gv, g_next});
      roots.push_back(numerics::bisect(g, I, I_next, tol));
    }
  }

  if (roots.empty()) {
    throw BracketFailure("R0 > 1 but g(I) has no sign change on (0, I0); raise n_brackets",
                         std::move(samples));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> distinct;
  for (double r : roots) {
    if (distinct.empty() || r - distinct.back() >= 10.0 * tol) distinct.push_back(r);
  }

  for (double I : distinct) {
    const State x{line_q1(p, I), I, p.gamma2() * I / (p.mu() + p.delta())};
    const double residual = verify_equilibrium(p, f, x);
    if (!(residual < 10.0 * tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "equilibrium candidate (" << x.S << ", " << x.I << ", " << x.R
         << ") has residual " << residual << " >= " << 10.0 * tol;
      throw VerificationError(os.str());
    }
    rep.endemic.push_back({x, residual});
  }
  return rep;
}

double verify_equilibrium(const ModelParams& p, const IncidenceFunction& f, const State& x) {
  return vector_field(p, f, x).max_abs();
}

}  // namespace gsirs
