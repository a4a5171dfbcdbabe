#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "gsirs/errors.hpp"
#include "gsirs/simulate.hpp"

using gsirs::Method;
using gsirs::State;

namespace {

const gsirs::ModelParams kP = fixtures::example_params();

}  // namespace

TEST_CASE("trajectories converge to the predicted attractors") {
  const State x0{30.0, 10.0, 5.0};
  const auto low = gsirs::integrate(kP, fixtures::power_k(0.0002), x0, 500.0,
                                    Method::rk45_adaptive, 1e-8);
  CHECK(gsirs::max_norm_distance(low.final_state(), State{50, 0, 0}) < 1e-2);

  const auto high = gsirs::integrate(kP, fixtures::power_k(0.0008), x0, 500.0,
                                     Method::rk45_adaptive, 1e-8);
  CHECK(gsirs::max_norm_distance(high.final_state(), fixtures::kE1Rounded) < 1e-2);
  CHECK(high.times.back() == 500.0);
  CHECK(high.step_stats.steps > 0);
  CHECK(high.step_stats.max_error <= 1.0);
}

TEST_CASE("an equilibrium start stays put") {
  for (auto method : {Method::rk45_adaptive, Method::rk4_fixed}) {
    const double arg = method == Method::rk4_fixed ? 0.5 : 1e-8;
    const auto traj = gsirs::integrate(kP, fixtures::power_k(0.0008), gsirs::dfe(kP), 200.0,
                                       method, arg);
    for (const auto& x : traj.states) {
      CHECK(gsirs::max_norm_distance(x, State{50, 0, 0}) < 1e-9);
    }
  }
}

TEST_CASE("times are strictly increasing and end at t_end") {
  const auto traj = gsirs::integrate(kP, fixtures::power_k(0.0008), State{5, 5, 5}, 37.3,
                                     Method::rk4_fixed, 0.1);
  for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
  CHECK(traj.times.back() == 37.3);
}

TEST_CASE("stored points are capped and thinned uniformly") {
  const auto traj = gsirs::integrate(kP, fixtures::power_k(0.0008), State{5, 5, 5}, 100.0,
                                     Method::rk4_fixed, 0.001);
  CHECK(traj.times.size() <= gsirs::kDefaultMaxPoints);
  CHECK(traj.times.size() > gsirs::kDefaultMaxPoints - 10);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(100.0).epsilon(1e-12));

  const auto small = gsirs::downsample(traj, 11);
  REQUIRE(small.times.size() == 11);
  for (std::size_t k = 0; k < 11; ++k) CHECK(small.times[k] == doctest::Approx(10.0 * k).epsilon(1e-3));
}

TEST_CASE("a constant trajectory satisfies the population law exactly") {
  const auto still = gsirs::integrate(kP, fixtures::power_k(0.0008), gsirs::dfe(kP), 10.0,
                                      Method::rk4_fixed, 0.1);
  CHECK(gsirs::conservation_check(still, kP, fixtures::power_k(0.0008)) < 1e-12);
}

TEST_CASE("integrate validates inputs") {
  const auto f = fixtures::power_k(0.0008);
  CHECK_THROWS_AS(gsirs::integrate(kP, f, State{60, 0, 0}, 1.0, Method::rk45_adaptive, 1e-8),
                  gsirs::DomainError);
  CHECK_THROWS_AS(gsirs::integrate(kP, f, State{-1e-13, 1, 1}, 1.0, Method::rk45_adaptive, 1e-8),
                  gsirs::DomainError);
  CHECK_THROWS_AS(gsirs::integrate(kP, f, State{1, 1, 1}, 0.0, Method::rk45_adaptive, 1e-8),
                  gsirs::InvalidArgument);
  CHECK_THROWS_AS(gsirs::integrate(kP, f, State{1, 1, 1}, 1.0, Method::rk4_fixed, -0.1),
                  gsirs::InvalidArgument);
}

TEST_CASE("an incidence that breaks positivity raises InvarianceViolation") {
  // Removes infectives faster than they exist, driving I negative.
  const auto f = gsirs::IncidenceFunction::custom(
      "sink", [](double, double) { return -5.0; }, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(
      gsirs::integrate(kP, f, State{10, 0.5, 0}, 10.0, Method::rk4_fixed, 0.01),
      gsirs::InvarianceViolation);
}

TEST_CASE("an exploding incidence raises BlowUp or InvarianceViolation") {
  const auto f = gsirs::IncidenceFunction::custom(
      "explode", [](double S, double I) { return S * I * std::exp(I); });
  CHECK_THROWS_AS(gsirs::integrate(kP, f, State{40, 5, 0}, 50.0, Method::rk4_fixed, 0.1),
                  gsirs::Error);
}

TEST_CASE("sweep converges on the coarse lattice for both parameter sets") {
  const auto initials = gsirs::omega_lattice(kP, 2);
  REQUIRE(initials.size() == 8);

  const auto low = gsirs::sweep(kP, fixtures::power_k(0.0002), initials, 500.0, 1e-2);
  CHECK_FALSE(low.target_is_endemic);
  CHECK(low.target == State{50, 0, 0});
  CHECK(low.converged_fraction == 1.0);

  const auto high = gsirs::sweep(kP, fixtures::power_k(0.0008), initials, 500.0, 1e-2, 50);
  CHECK(high.target_is_endemic);
  CHECK(gsirs::max_norm_distance(high.target, fixtures::kE1) < 1e-8);
  CHECK(high.converged_fraction == 1.0);
  for (std::size_t i = 0; i < initials.size(); ++i) {
    CHECK(high.runs[i].initial == initials[i]);
    REQUIRE(high.runs[i].trajectory.has_value());
    CHECK(high.runs[i].trajectory->times.size() <= 50);
  }
}

TEST_CASE("sweep from the target has zero distance") {
  const auto f = fixtures::power_k(0.0008);
  const std::vector<State> initials(3, fixtures::kE1);
  const auto rep = gsirs::sweep(kP, f, initials, 1.0, 1e-2);
  for (const auto& run : rep.runs) CHECK(run.distance < 1e-9);
}

TEST_CASE("sweep with a tiny horizon does not converge") {
  const auto rep =
      gsirs::sweep(kP, fixtures::power_k(0.0002), gsirs::omega_lattice(kP, 2), 0.001, 1e-2);
  CHECK(rep.converged_fraction < 1.0);
}

TEST_CASE("sweep records per-run failures") {
  const auto f = gsirs::IncidenceFunction::custom(
      "sink", [](double S, double I) { return S > 20.0 ? -5.0 * I - 5.0 : 0.0005 * S * I; },
      [](double S, double) { return 0.0005 * S; });
  const std::vector<State> initials{{10, 1, 1}, {40, 0.5, 0}};
  const auto rep = gsirs::sweep(kP, f, initials, 20.0, 1e-2);
  CHECK_FALSE(rep.runs[1].error == std::nullopt);
  CHECK(std::isinf(rep.runs[1].distance));
  CHECK(rep.converged_fraction < 1.0);
}

TEST_CASE("sweep is deterministic") {
  const auto initials = gsirs::omega_lattice(kP, 3);
  const auto a = gsirs::sweep(kP, fixtures::power_k(0.0008), initials, 100.0, 1e-2);
  const auto b = gsirs::sweep(kP, fixtures::power_k(0.0008), initials, 100.0, 1e-2);
  for (std::size_t i = 0; i < initials.size(); ++i) {
    CHECK(a.runs[i].final_state == b.runs[i].final_state);
  }
}

TEST_CASE("omega_lattice stays strictly inside Omega") {
  const auto pts = gsirs::omega_lattice(kP, 8);
  CHECK(pts.size() == 512);
  for (const auto& x : pts) {
    CHECK(gsirs::in_omega(kP, x, 0.0));
    CHECK(x.I > 0.0);
  }
  CHECK_THROWS_AS(gsirs::omega_lattice(kP, 1), gsirs::InvalidArgument);
}

TEST_CASE("write_csv emits the documented header") {
  const auto traj = gsirs::integrate(kP, fixtures::power_k(0.0008), State{1, 2, 3}, 1.0,
                                     Method::rk4_fixed, 0.5);
  std::ostringstream os;
  gsirs::write_csv(os, traj);
  const std::string s = os.str();
  CHECK(s.rfind("t,S,I,R\n0,1,2,3\n", 0) == 0);
  CHECK(s.back() == '\n');
}

TEST_CASE("method names round-trip") {
  CHECK(gsirs::parse_method(gsirs::to_string(Method::rk4_fixed)) == Method::rk4_fixed);
  CHECK(gsirs::parse_method("rk45_adaptive") == Method::rk45_adaptive);
  CHECK_THROWS_AS(gsirs::parse_method("euler"), gsirs::InvalidArgument);
}
