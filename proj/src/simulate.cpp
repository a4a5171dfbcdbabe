#include "gsirs/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "gsirs/equilibria.hpp"
#include "gsirs/errors.hpp"

namespace gsirs {
namespace {

using Vec3 = std::array<double, 3>;

constexpr double kClampBelowZero = 1e-12;
constexpr double kOmegaSlack = 1e-6;

Vec3 to_vec(const State& x) { return {x.S, x.I, x.R}; }
State to_state(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 rhs(const ModelParams& p, const IncidenceFunction& f, const Vec3& y) {
  const auto d = vector_field_unchecked(p, f, to_state(y));
  return {d.dS, d.dI, d.dR};
}

// y + h * sum_i w_i k_i
template <std::size_t N>
Vec3 combine(const Vec3& y, double h, const std::array<double, N>& w,
             const std::array<Vec3, N>& k) {
  Vec3 out = y;
  for (std::size_t c = 0; c < 3; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += w[i] * k[i][c];
    out[c] += h * acc;
  }
  return out;
}

std::string state_str(const Vec3& y) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << y[0] << ", " << y[1] << ", " << y[2] << ")";
  return os.str();
}

// Round-off clamping and the invariance/blow-up checks on an accepted state.
void accept_state(const ModelParams& p, Vec3& y, double t) {
  for (double& c : y) {
    if (!std::isfinite(c)) {
      throw BlowUp("non-finite state " + state_str(y) + " at t = " + std::to_string(t));
    }
    if (c < 0.0 && c >= -kClampBelowZero) c = 0.0;
  }
  if (!in_omega(p, to_state(y), kOmegaSlack)) {
    throw InvarianceViolation("state " + state_str(y) + " left Omega at t = " +
                              std::to_string(t));
  }
}

Vec3 rk4_step(const ModelParams& p, const IncidenceFunction& f, const Vec3& y, double h) {
  const Vec3 k1 = rhs(p, f, y);
  const Vec3 k2 = rhs(p, f, combine<1>(y, h / 2.0, {1.0}, {k1}));
  const Vec3 k3 = rhs(p, f, combine<1>(y, h / 2.0, {1.0}, {k2}));
  const Vec3 k4 = rhs(p, f, combine<1>(y, h, {1.0}, {k3}));
  return combine<4>(y, h / 6.0, {1.0, 2.0, 2.0, 1.0}, {k1, k2, k3, k4});
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 1> kA2{1.0 / 5.0};
constexpr std::array<double, 2> kA3{3.0 / 40.0, 9.0 / 40.0};
constexpr std::array<double, 3> kA4{44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr std::array<double, 4> kA5{19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0,
                                    -212.0 / 729.0};
constexpr std::array<double, 5> kA6{9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                    49.0 / 176.0, -5103.0 / 18656.0};
constexpr std::array<double, 6> kB5{35.0 / 384.0,     0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                    -2187.0 / 6784.0, 11.0 / 84.0};
constexpr std::array<double, 7> kB4{5179.0 / 57600.0,    0.0,           7571.0 / 16695.0,
                                    393.0 / 640.0,       -92097.0 / 339200.0,
                                    187.0 / 2100.0,      1.0 / 40.0};

void run_rk4(const ModelParams& p, const IncidenceFunction& f, Vec3 y, double t_end, double h,
             Trajectory& traj) {
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? t_end : static_cast<double>(k) * h;
    y = rk4_step(p, f, y, t_next - t);
    t = t_next;
    accept_state(p, y, t);
    traj.times.push_back(t);
    traj.states.push_back(to_state(y));
  }
  traj.step_stats.steps = steps;
}

void run_dopri(const ModelParams& p, const IncidenceFunction& f, Vec3 y, double t_end,
               double tol, Trajectory& traj) {
  const double h_min = 1e-10;
  const double h_max = t_end / 10.0;
  double h = std::clamp(t_end / 1000.0, h_min, h_max);
  double t = 0.0;
  Vec3 k1 = rhs(p, f, y);
  auto& stats = traj.step_stats;

  while (t < t_end) {
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    const Vec3 k2 = rhs(p, f, combine<1>(y, h, kA2, {k1}));
    const Vec3 k3 = rhs(p, f, combine<2>(y, h, kA3, {k1, k2}));
    const Vec3 k4 = rhs(p, f, combine<3>(y, h, kA4, {k1, k2, k3}));
    const Vec3 k5 = rhs(p, f, combine<4>(y, h, kA5, {k1, k2, k3, k4}));
    const Vec3 k6 = rhs(p, f, combine<5>(y, h, kA6, {k1, k2, k3, k4, k5}));
    const Vec3 y5 = combine<6>(y, h, kB5, {k1, k2, k3, k4, k5, k6});
    const Vec3 k7 = rhs(p, f, y5);
    const Vec3 y4 = combine<7>(y, h, kB4, {k1, k2, k3, k4, k5, k6, k7});

    double err = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double scale = tol + tol * std::max(std::abs(y[c]), std::abs(y5[c]));
      err = std::max(err, std::abs(y5[c] - y4[c]) / scale);
    }
    if (!std::isfinite(err)) {
      throw BlowUp("non-finite error estimate at t = " + std::to_string(t));
    }

    if (err <= 1.0 || h <= h_min) {
      t = last ? t_end : t + h;
      y = y5;
      accept_state(p, y, t);
      k1 = rhs(p, f, y);
      ++stats.steps;
      stats.max_error = std::max(stats.max_error, err);
      traj.times.push_back(t);
      traj.states.push_back(to_state(y));
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::clamp(h * grow, h_min, h_max);
    } else {
      ++stats.rejected;
      const double shrink = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h = std::max(h * shrink, h_min);
    }
  }
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
}

Method parse_method(std::string_view name) {
  if (name == "rk4_fixed") return Method::rk4_fixed;
  if (name == "rk45_adaptive") return Method::rk45_adaptive;
  throw InvalidArgument("unknown integration method '" + std::string(name) +
                        "' (expected rk4_fixed or rk45_adaptive)");
}

Trajectory integrate(const ModelParams& p, const IncidenceFunction& f, const State& x0,
                     double t_end, Method method, double step_or_tol, std::size_t max_points) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("integrate: t_end must be finite and > 0");
  }
  if (!(step_or_tol > 0.0) || !std::isfinite(step_or_tol)) {
    throw InvalidArgument("integrate: step/tolerance must be finite and > 0");
  }
  if (max_points < 2) throw InvalidArgument("integrate: max_points must be >= 2");
  if (!in_omega(p, x0, 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "initial state (" << x0.S << ", " << x0.I << ", " << x0.R
       << ") is outside Omega: requires S, I, R >= 0 and S + I + R <= Lambda/mu = " << p.S0();
    throw DomainError(os.str());
  }

  Trajectory traj;
  traj.params_id = p.describe() + ";incidence=" + f.label();
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  if (method == Method::rk4_fixed) {
    run_rk4(p, f, to_vec(x0), t_end, step_or_tol, traj);
  } else {
    run_dopri(p, f, to_vec(x0), t_end, step_or_tol, traj);
  }
  if (traj.times.size() > max_points) return downsample(traj, max_points);
  return traj;
}

Trajectory downsample(const Trajectory& traj, std::size_t max_points) {
  if (max_points < 2) throw InvalidArgument("downsample: max_points must be >= 2");
  const std::size_t n = traj.times.size();
  if (n <= max_points) return traj;
  Trajectory out;
  out.params_id = traj.params_id;
  out.step_stats = traj.step_stats;
  out.times.reserve(max_points);
  out.states.reserve(max_points);
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  std::size_t idx = 0;
  std::size_t last_taken = n;  // sentinel
  for (std::size_t k = 0; k < max_points; ++k) {
    const double target =
        k + 1 == max_points ? t1
                            : t0 + (t1 - t0) * static_cast<double>(k) /
                                       static_cast<double>(max_points - 1);
    while (idx + 1 < n &&
           std::abs(traj.times[idx + 1] - target) <= std::abs(traj.times[idx] - target)) {
      ++idx;
    }
    if (idx == last_taken) continue;
    out.times.push_back(traj.times[idx]);
    out.states.push_back(traj.states[idx]);
    last_taken = idx;
  }
  return out;
}

std::vector<State> omega_lattice(const ModelParams& p, int n) {
  if (n < 2) throw InvalidArgument("omega_lattice: n must be >= 2");
  const double S0 = p.S0();
  auto frac = [n](int i) { return (static_cast<double>(i) + 0.5) / static_cast<double>(n); };
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double a = frac(i);
        const double b = frac(j);
        const double c = frac(k);
        out.push_back({S0 * a, S0 * (1.0 - a) * b, S0 * (1.0 - a) * (1.0 - b) * c});
      }
    }
  }
  return out;
}

SweepReport sweep(const ModelParams& p, const IncidenceFunction& f,
                  const std::vector<State>& initials, double t_end, double conv_tol,
                  std::size_t keep_points) {
  if (initials.empty()) throw InvalidArgument("sweep: no initial states");
  if (!(conv_tol > 0.0)) throw InvalidArgument("sweep: conv_tol must be > 0");
  for (const auto& x : initials) {
    if (!in_omega(p, x, 0.0)) throw DomainError("sweep: initial state outside Omega");
  }

  SweepReport rep;
  rep.conv_tol = conv_tol;
  rep.t_end = t_end;
  rep.target = dfe(p);
  const auto eq = find_endemic(p, f);
  if (eq.r0 > 1.0 && !eq.endemic.empty()) {
    rep.target = eq.endemic.front().state;
    rep.target_is_endemic = true;
  }

  rep.runs.resize(initials.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < initials.size(); i = next++) {
      SweepRun& run = rep.runs[i];
      run.initial = initials[i];
      try {
        auto traj = integrate(p, f, initials[i], t_end, Method::rk45_adaptive, 1e-8);
        run.final_state = traj.final_state();
        run.distance = max_norm_distance(run.final_state, rep.target);
        if (keep_points > 0) run.trajectory = downsample(traj, keep_points);
      } catch (const std::exception& e) {
        run.final_state = initials[i];
        run.distance = std::numeric_limits<double>::infinity();
        run.error = e.what();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(initials.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  const auto converged = std::count_if(rep.runs.begin(), rep.runs.end(), [&](const SweepRun& r) {
    return r.distance < conv_tol;
  });
  rep.converged_fraction =
      static_cast<double>(converged) / static_cast<double>(rep.runs.size());
  return rep;
}

double conservation_check(const Trajectory& traj, const ModelParams& p,
                          const IncidenceFunction& /*f*/) {
  if (traj.times.empty()) throw InvalidArgument("conservation_check: empty trajectory");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.times.size(); ++k) {
    const double dN = (traj.states[k + 1].total() - traj.states[k - 1].total()) /
                      (traj.times[k + 1] - traj.times[k - 1]);
    const State& x = traj.states[k];
    const double law = p.Lambda() - p.mu() * x.total() - p.alpha() * x.I;
    worst = std::max(worst, std::abs(dN - law));
  }
  return worst;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,S,I,R\n";
  char buf[128];
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const State& x = traj.states[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.times[k], x.S, x.I, x.R);
    out << buf;
  }
}

}  // namespace gsirs
