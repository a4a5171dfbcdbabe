#pragma once

#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"

namespace fixtures {

// Lambda = 10, mu = 0.2, gamma1 = gamma2 = 0.2, alpha = delta = 0.1.
inline gsirs::ModelParams example_params() { return {10.0, 0.2, 0.2, 0.2, 0.1, 0.1}; }

inline gsirs::IncidenceFunction power_k(double k) {
  return gsirs::make_builtin(gsirs::Family::power, {{"k", k}, {"q", 2.0}});
}

// Endemic equilibrium of the k = 0.0008 set: S* = sqrt(0.7 / k), the rest from
// the equilibrium line and R = gamma2 I / (mu + delta).
inline constexpr gsirs::State kE1{29.58039891549808, 9.424431269770117, 6.282954179846745};

// Rounded coordinates quoted alongside the reference figures.
inline constexpr gsirs::State kE1Rounded{29.5804, 9.4244, 6.2830};

// Incidence that vanishes identically; used where the linear system has a
// closed-form solution.
inline gsirs::IncidenceFunction zero_incidence() {
  return gsirs::IncidenceFunction::custom(
      "zero", [](double, double) { return 0.0; }, [](double, double) { return 0.0; });
}

}  // namespace fixtures
