#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"

namespace gsirs {

enum class Method { rk4_fixed, rk45_adaptive };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct StepStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error = 0.0;  // largest accepted scaled error estimate (adaptive only)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::string params_id;
  StepStats step_stats;

  const State& final_state() const { return states.back(); }
};

inline constexpr std::size_t kDefaultMaxPoints = 10000;

/// Integrates the system from x0 over [0, t_end].
///
/// rk4_fixed uses step_or_tol as the step (last step shortened to land on
/// t_end). rk45_adaptive is a Dormand-Prince 5(4) pair with
/// atol = rtol = step_or_tol. Negative components within 1e-12 of zero are
/// clamped; larger excursions beyond 1e-6 outside Omega raise
/// InvarianceViolation, non-finite states raise BlowUp. The stored
/// trajectory is thinned to at most max_points samples.
Trajectory integrate(const ModelParams& p, const IncidenceFunction& f, const State& x0,
                     double t_end, Method method, double step_or_tol,
                     std::size_t max_points = kDefaultMaxPoints);

/// Keeps at most max_points samples, nearest to a uniform time grid; first and
/// last samples are always retained.
Trajectory downsample(const Trajectory& traj, std::size_t max_points);

struct SweepRun {
  State initial;
  State final_state;
  double distance = 0.0;  // max-norm to the target; +inf on failure
  std::optional<std::string> error;
  std::optional<Trajectory> trajectory;
};

struct SweepReport {
  State target;
  bool target_is_endemic = false;
  std::vector<SweepRun> runs;
  double converged_fraction = 0.0;
  double conv_tol = 0.0;
  double t_end = 0.0;
};

/// Integrates every initial state with rk45_adaptive(1e-8) and measures the
/// distance of the final state to the predicted attractor (the endemic
/// equilibrium when R0 > 1 and one exists, the DFE otherwise). Run failures
/// are recorded, not propagated. `keep_points > 0` retains each trajectory
/// thinned to that many samples.
SweepReport sweep(const ModelParams& p, const IncidenceFunction& f,
                  const std::vector<State>& initials, double t_end, double conv_tol,
                  std::size_t keep_points = 0);

/// n^3 initial states strictly inside Omega: with a, b, c on the cell-centred
/// lattice (i + 1/2)/n, S = S0 a, I = S0 (1 - a) b, R = S0 (1 - a)(1 - b) c.
std::vector<State> omega_lattice(const ModelParams& p, int n);

/// Max over interior samples of |centred dN/dt - (Lambda - mu N - alpha I)|.
double conservation_check(const Trajectory& traj, const ModelParams& p,
                          const IncidenceFunction& f);

/// CSV with header `t,S,I,R`.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace gsirs
