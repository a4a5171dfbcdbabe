#include "gsirs/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsirs/errors.hpp"

namespace gsirs {
namespace {

void require(bool ok, const char* name, const char* constraint, double value) {
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << "parameter " << name << " = " << value << " violates: " << constraint;
    throw InvalidArgument(os.str());
  }
}

}  // namespace

ModelParams::ModelParams(double Lambda, double mu, double gamma1, double gamma2, double alpha,
                         double delta)
    : Lambda_(Lambda), mu_(mu), gamma1_(gamma1), gamma2_(gamma2), alpha_(alpha), delta_(delta) {
  require(std::isfinite(Lambda) && Lambda > 0.0, "Lambda", "Lambda > 0", Lambda);
  require(std::isfinite(mu) && mu > 0.0, "mu", "mu > 0", mu);
  require(std::isfinite(gamma1) && gamma1 >= 0.0, "gamma1", "gamma1 >= 0", gamma1);
  require(std::isfinite(gamma2) && gamma2 >= 0.0, "gamma2", "gamma2 >= 0", gamma2);
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha", "alpha >= 0", alpha);
  require(std::isfinite(delta) && delta >= 0.0, "delta", "delta >= 0", delta);
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "Lambda=" << Lambda_ << ";mu=" << mu_ << ";gamma1=" << gamma1_ << ";gamma2=" << gamma2_
     << ";alpha=" << alpha_ << ";delta=" << delta_;
  return os.str();
}

double Derivative::max_abs() const {
  return std::max({std::abs(dS), std::abs(dI), std::abs(dR)});
}

Derivative vector_field_unchecked(const ModelParams& p, const IncidenceFunction& f,
                                  const State& x) {
  const double inc = f.f(x.S, x.I);
  if (!std::isfinite(inc)) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite incidence " << inc << " at (S=" << x.S << ", I=" << x.I << ")";
    throw EvaluationError(os.str());
  }
  return {p.Lambda() - p.mu() * x.S - inc + p.gamma1() * x.I + p.delta() * x.R,
          inc - p.infective_exit_rate() * x.I,
          p.gamma2() * x.I - (p.mu() + p.delta()) * x.R};
}

Derivative vector_field(const ModelParams& p, const IncidenceFunction& f, const State& x) {
  if (!(x.S >= 0.0 && x.I >= 0.0 && x.R >= 0.0)) {
    throw DomainError("vector_field: state components must be non-negative");
  }
  return vector_field_unchecked(p, f, x);
}

State dfe(const ModelParams& p) { return {p.S0(), 0.0, 0.0}; }

double r0_from_beta(const ModelParams& p, double beta) {
  return p.Lambda() * beta / (p.mu() * p.infective_exit_rate());
}

double r0(const ModelParams& p, const IncidenceFunction& f, double eps) {
  return r0_from_beta(p, compute_beta(f, p.Lambda(), p.mu(), eps));
}

bool in_omega(const ModelParams& p, const State& x, double tol) {
  return x.S >= -tol && x.I >= -tol && x.R >= -tol && x.total() <= p.S0() + tol;
}

double max_norm_distance(const State& a, const State& b) {
  return std::max({std::abs(a.S - b.S), std::abs(a.I - b.I), std::abs(a.R - b.R)});
}

}  // namespace gsirs
