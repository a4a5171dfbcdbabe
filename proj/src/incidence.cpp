#include "gsirs/incidence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsirs/errors.hpp"
#include "gsirs/numerics.hpp"

namespace gsirs {
namespace {

// Step used to extrapolate f / I toward I = 0 for user functions without f1.
constexpr double kExtrapolationStep = 1e-4;
constexpr double kH1Tol = 1e-12;
constexpr double kFactorRelTol = 1e-10;
constexpr double kStrictPositive = 1e-12;
// Floor for finite-difference sign tests, relative to max(1, |f1|).
constexpr double kFdNoise = 1e-8;
constexpr double kFdStep = 1e-5;

std::string point_str(double S, double I) {
  std::ostringstream os;
  os.precision(17);
  os << "(S=" << S << ", I=" << I << ")";
  return os.str();
}

double checked(double value, const char* what, double S, double I) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite " << what << " = " << value << " at " << point_str(S, I);
    throw EvaluationError(os.str());
  }
  return value;
}

class CoefficientReader {
 public:
  CoefficientReader(Family family, const Coefficients& c) : family_(family), c_(c) {}

  double required(const std::string& name) {
    used_.push_back(name);
    auto it = c_.find(name);
    if (it == c_.end()) fail(name, "is required");
    check_finite(name, it->second);
    return it->second;
  }

  double optional(const std::string& name, double fallback) {
    used_.push_back(name);
    auto it = c_.find(name);
    if (it == c_.end()) return fallback;
    check_finite(name, it->second);
    return it->second;
  }

  void positive(const std::string& name, double v) {
    if (!(v > 0.0)) fail(name, "must be > 0");
  }
  void non_negative(const std::string& name, double v) {
    if (!(v >= 0.0)) fail(name, "must be >= 0");
  }

  void reject_unknown() {
    for (const auto& [name, value] : c_) {
      if (std::find(used_.begin(), used_.end(), name) == used_.end()) {
        fail(name, "is not a coefficient of this family");
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& name, const char* what) const {
    throw InvalidArgument(std::string(to_string(family_)) + " coefficient '" + name + "' " +
                          what);
  }
  void check_finite(const std::string& name, double v) const {
    if (!std::isfinite(v)) fail(name, "must be finite");
  }

  Family family_;
  const Coefficients& c_;
  std::vector<std::string> used_;
};

std::string format_label(Family family, const Coefficients& c) {
  std::ostringstream os;
  os << to_string(family) << "(";
  bool first = true;
  for (const auto& [name, value] : c) {
    // Shortest representation that round-trips.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    if (!first) os << ", ";
    os << name << "=" << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    first = false;
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::bilinear: return "bilinear";
    case Family::power: return "power";
    case Family::saturated_in_I: return "saturated_in_I";
    case Family::psi_ratio: return "psi_ratio";
    case Family::ruan: return "ruan";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family fam : {Family::bilinear, Family::power, Family::saturated_in_I,
                     Family::psi_ratio, Family::ruan}) {
    if (to_string(fam) == name) return fam;
  }
  throw InvalidArgument("unknown incidence family '" + std::string(name) + "'");
}

IncidenceFunction IncidenceFunction::custom(std::string label, ScalarField f,
                                            std::optional<ScalarField> f1,
                                            std::optional<Partials> partials) {
  if (!f) throw InvalidArgument("custom incidence requires a callable f");
  if (f1 && !*f1) f1.reset();
  if (partials && (!partials->df1_dS || !partials->df1_dI)) {
    throw InvalidArgument("custom incidence partials must provide both df1_dS and df1_dI");
  }
  return IncidenceFunction(std::make_shared<const Impl>(
      Impl{std::move(label), std::move(f), std::move(f1), std::move(partials), std::nullopt}));
}

double IncidenceFunction::f1(double S, double I) const {
  if (impl_->f1) return (*impl_->f1)(S, I);
  if (I > 0.0) return impl_->f(S, I) / I;
  const auto est = numerics::limit_at_zero(
      [this, S](double h) { return impl_->f(S, h) / h; }, kExtrapolationStep);
  if (!est.converged) {
    throw LimitFailure("f/I does not converge as I -> 0+ at " + point_str(S, 0.0));
  }
  return est.value;
}

double IncidenceFunction::df1_dS(double S, double I) const {
  if (impl_->partials) return impl_->partials->df1_dS(S, I);
  return fd_df1_dS(S, I, kFdStep);
}

double IncidenceFunction::df1_dI(double S, double I) const {
  if (impl_->partials) return impl_->partials->df1_dI(S, I);
  return fd_df1_dI(S, I, kFdStep);
}

double IncidenceFunction::fd_df1_dS(double S, double I, double step) const {
  return numerics::derivative([&](double s) { return f1(s, I); }, S, step, 0.0);
}

double IncidenceFunction::fd_df1_dI(double S, double I, double step) const {
  return numerics::derivative([&](double i) { return f1(S, i); }, I, step, 0.0);
}

IncidenceFunction make_builtin(Family family, const Coefficients& coefficients) {
  CoefficientReader rd(family, coefficients);
  IncidenceFunction::Impl impl;
  impl.family = family;

  switch (family) {
    case Family::bilinear: {
      const double beta = rd.required("beta");
      rd.positive("beta", beta);
      impl.f = [beta](double S, double I) { return beta * S * I; };
      impl.f1 = [beta](double S, double) { return beta * S; };
      impl.partials = Partials{[beta](double, double) { return beta; },
                               [](double, double) { return 0.0; }};
      break;
    }
    case Family::power: {
      const double k = rd.required("k");
      const double q = rd.required("q");
      const double p = rd.optional("p", 1.0);
      rd.positive("k", k);
      rd.positive("q", q);
      rd.positive("p", p);
      impl.f = [k, p, q](double S, double I) { return k * std::pow(I, p) * std::pow(S, q); };
      impl.f1 = [k, p, q](double S, double I) {
        if (p == 1.0) return k * std::pow(S, q);
        if (I > 0.0) return k * std::pow(I, p - 1.0) * std::pow(S, q);
        // Continuous extension at I = 0: vanishes for p > 1, diverges for p < 1.
        if (p > 1.0 || S == 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
      };
      impl.partials = Partials{
          [k, p, q](double S, double I) {
            const double i_part = p == 1.0 ? 1.0 : std::pow(I, p - 1.0);
            return k * q * std::pow(S, q - 1.0) * i_part;
          },
          [k, p, q](double S, double I) {
            if (p == 1.0) return 0.0;
            return k * (p - 1.0) * std::pow(I, p - 2.0) * std::pow(S, q);
          }};
      break;
    }
    case Family::saturated_in_I: {
      const double beta = rd.required("beta");
      const double a = rd.required("a");
      rd.positive("beta", beta);
      rd.non_negative("a", a);
      impl.f = [beta, a](double S, double I) { return beta * S * I / (1.0 + a * I); };
      impl.f1 = [beta, a](double S, double I) { return beta * S / (1.0 + a * I); };
      impl.partials = Partials{
          [beta, a](double, double I) { return beta / (1.0 + a * I); },
          [beta, a](double S, double I) {
            const double d = 1.0 + a * I;
            return -a * beta * S / (d * d);
          }};
      break;
    }
    case Family::psi_ratio: {
      const double beta = rd.required("beta");
      const double a = rd.optional("a", 0.0);
      const double b = rd.optional("b", 0.0);
      rd.positive("beta", beta);
      rd.non_negative("a", a);
      rd.non_negative("b", b);
      auto psi = [a, b](double I) { return 1.0 + a * I + b * I * I; };
      impl.f = [beta, psi](double S, double I) { return beta * S * I / psi(I); };
      impl.f1 = [beta, psi](double S, double I) { return beta * S / psi(I); };
      impl.partials = Partials{
          [beta, psi](double, double I) { return beta / psi(I); },
          [beta, a, b, psi](double S, double I) {
            const double d = psi(I);
            return -beta * S * (a + 2.0 * b * I) / (d * d);
          }};
      break;
    }
    case Family::ruan: {
      const double beta = rd.required("beta");
      const double rho = rd.required("rho");
      rd.positive("beta", beta);
      rd.non_negative("rho", rho);
      impl.f = [beta, rho](double S, double I) {
        return beta * I * I * S / (1.0 + rho * I * I);
      };
      impl.f1 = [beta, rho](double S, double I) { return beta * I * S / (1.0 + rho * I * I); };
      impl.partials = Partials{
          [beta, rho](double, double I) { return beta * I / (1.0 + rho * I * I); },
          [beta, rho](double S, double I) {
            const double d = 1.0 + rho * I * I;
            return beta * S * (1.0 - rho * I * I) / (d * d);
          }};
      break;
    }
  }
  rd.reject_unknown();
  impl.label = format_label(family, coefficients);
  return IncidenceFunction(std::make_shared<const IncidenceFunction::Impl>(std::move(impl)));
}

IncidenceFunction make_builtin(std::string_view family, const Coefficients& coefficients) {
  return make_builtin(parse_family(family), coefficients);
}

HypothesisReport check_hypotheses(const IncidenceFunction& f, double S_max, int grid_n,
                                  double eps) {
  if (!(S_max > 0.0) || !std::isfinite(S_max)) {
    throw InvalidArgument("check_hypotheses: S_max must be a finite positive number");
  }
  if (grid_n < 8) throw InvalidArgument("check_hypotheses: grid_n must be >= 8");
  if (!(eps > 0.0 && eps < S_max)) {
    throw InvalidArgument("check_hypotheses: eps must satisfy 0 < eps < S_max");
  }

  HypothesisReport rep;
  rep.grid = {S_max, grid_n, eps};
  const auto n = static_cast<std::size_t>(grid_n);
  auto at = [&](std::size_t i) { return numerics::grid_point(0.0, S_max, i, n); };
  auto add = [&](const char* h, double S, double I, double observed) {
    rep.violations.push_back({h, S, I, observed});
  };

  // H1: boundary identities, non-negativity, factorisation f = I f1.
  for (std::size_t i = 0; i < n; ++i) {
    const double x = at(i);
    const double on_S_axis = checked(f.f(0.0, x), "f", 0.0, x);
    if (std::abs(on_S_axis) > kH1Tol) {
      rep.h1_pass = false;
      add("H1", 0.0, x, on_S_axis);
    }
    const double on_I_axis = checked(f.f(x, 0.0), "f", x, 0.0);
    if (std::abs(on_I_axis) > kH1Tol) {
      rep.h1_pass = false;
      add("H1", x, 0.0, on_I_axis);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double S = at(i);
      const double I = at(j);
      const double fv = checked(f.f(S, I), "f", S, I);
      if (fv < 0.0) {
        rep.h1_pass = false;
        add("H1", S, I, fv);
      }
      if (I > 0.0) {
        const double f1v = checked(f.f1(S, I), "f1", S, I);
        if (f1v < 0.0) {
          rep.h1_pass = false;
          add("H1", S, I, f1v);
        }
        const double gap = std::abs(fv - I * f1v);
        if (gap > kFactorRelTol * std::max(1.0, std::abs(fv))) {
          rep.h1_pass = false;
          add("H1", S, I, gap);
        }
      }
    }
  }

  // H2: strict sign conditions on the interior; boundary degeneracy is noted.
  const bool analytic = f.has_analytic_partials();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double S = at(i);
      const double I = at(j);
      if (i == 0 || j == 0) {
        try {
          const double dS = f.df1_dS(S, I);
          if (!(dS > kStrictPositive)) ++rep.h2_boundary_degenerate;
        } catch (const Error&) {
          ++rep.h2_boundary_degenerate;
        }
        continue;
      }
      const double dS = checked(f.df1_dS(S, I), "df1/dS", S, I);
      const double dI = checked(f.df1_dI(S, I), "df1/dI", S, I);
      double s_floor = kStrictPositive;
      double i_ceiling = 0.0;
      if (!analytic) {
        const double noise = kFdNoise * std::max(1.0, std::abs(f.f1(S, I)));
        s_floor = noise;
        i_ceiling = noise;
      }
      if (!(dS > s_floor)) {
        rep.h2_pass = false;
        add("H2", S, I, dS);
      }
      if (!(dI <= i_ceiling)) {
        rep.h2_pass = false;
        add("H2", S, I, dI);
      }
    }
  }

  // H3: lim_{I->0+} f/I exists and is positive for S > 0.
  for (std::size_t i = 1; i < n; ++i) {
    const double S = at(i);
    const auto est = numerics::limit_at_zero(
        [&](double h) { return checked(f.f(S, h), "f", S, h) / h; }, eps);
    rep.h3_limit_at.emplace_back(S, est.value);
    if (!(est.converged && est.value > 0.0)) {
      rep.h3_pass = false;
      add("H3", S, 0.0, est.value);
    }
  }
  return rep;
}

double compute_beta(const IncidenceFunction& f, double Lambda, double mu, double eps) {
  if (!(Lambda > 0.0 && mu > 0.0)) {
    throw InvalidArgument("compute_beta: Lambda and mu must be > 0");
  }
  const double S0 = Lambda / mu;
  double slope = 0.0;
  if (f.has_exact_f1()) {
    slope = f.f1(S0, 0.0);
    if (!std::isfinite(slope)) {
      throw LimitFailure("f/I diverges as I -> 0+ at S0 = " + std::to_string(S0));
    }
  } else {
    const auto est = numerics::limit_at_zero([&](double h) { return f.f(S0, h) / h; }, eps);
    if (!est.converged) {
      throw LimitFailure("f/I does not converge as I -> 0+ at S0 (relative change above 1e-6)");
    }
    slope = est.value;
  }
  if (!(slope > 0.0)) {
    throw HypothesisViolation("lim_{I->0+} f(S0, I)/I is not positive (H3 violated)");
  }
  return mu / Lambda * slope;
}

BoundCheck check_lemma1_bound(const IncidenceFunction& f, double Lambda, double mu,
                              int grid_n) {
  if (grid_n < 2) throw InvalidArgument("check_lemma1_bound: grid_n must be >= 2");
  const double beta = compute_beta(f, Lambda, mu);
  const double S0 = Lambda / mu;
  const double coeff = S0 * beta;
  const auto n = static_cast<std::size_t>(grid_n);

  BoundCheck out;
  out.pass = true;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double S = numerics::grid_point(0.0, S0, i, n);
      const double I = numerics::grid_point(0.0, S0, j, n);
      const double bound = coeff * I;
      const double slack = bound - checked(f.f(S, I), "f", S, I);
      if (slack < -1e-12 * std::max(1.0, bound)) out.pass = false;
      if (slack < out.min_slack) {
        out.min_slack = slack;
        out.S_at = S;
        out.I_at = I;
      }
    }
  }
  return out;
}

}  // namespace gsirs
