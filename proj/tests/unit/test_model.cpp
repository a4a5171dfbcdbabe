#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gsirs/errors.hpp"
#include "gsirs/model.hpp"

using gsirs::ModelParams;
using gsirs::State;

TEST_CASE("ModelParams validates its domain") {
  CHECK_NOTHROW(ModelParams(1.0, 1.0, 0.0, 0.0, 0.0, 0.0));
  CHECK_THROWS_AS(ModelParams(0.0, 0.2, 0.2, 0.2, 0.1, 0.1), gsirs::InvalidArgument);
  CHECK_THROWS_AS(ModelParams(10.0, 0.0, 0.2, 0.2, 0.1, 0.1), gsirs::InvalidArgument);
  CHECK_THROWS_AS(ModelParams(10.0, 0.2, -0.1, 0.2, 0.1, 0.1), gsirs::InvalidArgument);
  CHECK_THROWS_AS(ModelParams(10.0, 0.2, 0.2, 0.2, 0.1, NAN), gsirs::InvalidArgument);
  CHECK_THROWS_AS(ModelParams(INFINITY, 0.2, 0.2, 0.2, 0.1, 0.1), gsirs::InvalidArgument);
}

TEST_CASE("vector_field vanishes at the disease-free equilibrium") {
  const auto p = fixtures::example_params();
  const auto d = gsirs::vector_field(p, fixtures::power_k(0.0008), State{50.0, 0.0, 0.0});
  CHECK(d.dS == 0.0);
  CHECK(d.dI == 0.0);
  CHECK(d.dR == 0.0);
}

TEST_CASE("vector_field is small at the rounded endemic equilibrium") {
  const auto d = gsirs::vector_field(fixtures::example_params(), fixtures::power_k(0.0008),
                                     fixtures::kE1Rounded);
  CHECK(std::abs(d.dS) < 1e-3);
  CHECK(std::abs(d.dI) < 1e-3);
  CHECK(std::abs(d.dR) < 1e-3);
}

TEST_CASE("vector_field with zero incidence is the linear system") {
  const auto p = fixtures::example_params();
  const auto d = gsirs::vector_field(p, fixtures::zero_incidence(), State{0.0, 1.0, 0.0});
  CHECK(d.dS == doctest::Approx(p.Lambda() + p.gamma1()));
  CHECK(d.dI == doctest::Approx(-(0.2 + 0.2 + 0.2 + 0.1)));
  CHECK(d.dR == doctest::Approx(p.gamma2()));
}

TEST_CASE("vector_field rejects negative states and non-finite incidence") {
  const auto p = fixtures::example_params();
  CHECK_THROWS_AS(gsirs::vector_field(p, fixtures::power_k(0.0008), State{-1.0, 1.0, 1.0}),
                  gsirs::DomainError);
  const auto nan_f = gsirs::IncidenceFunction::custom(
      "nan", [](double, double I) { return I > 0.5 ? NAN : 0.0; });
  CHECK_THROWS_AS(gsirs::vector_field(p, nan_f, State{1.0, 1.0, 1.0}), gsirs::EvaluationError);
}

TEST_CASE("component sum equals Lambda - mu N - alpha I") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  const auto p = fixtures::example_params();
  const auto f = gsirs::make_builtin(gsirs::Family::psi_ratio, {{"beta", 0.2}, {"a", 0.3}});
  for (int k = 0; k < 1000; ++k) {
    const State x{u(rng), u(rng), u(rng)};
    const auto d = gsirs::vector_field(p, f, x);
    const double expected = p.Lambda() - p.mu() * x.total() - p.alpha() * x.I;
    CHECK(std::abs(d.sum() - expected) <= 1e-12 * std::max(1.0, std::abs(d.dS) + std::abs(d.dI)));
  }
}

TEST_CASE("dfe is (Lambda / mu, 0, 0)") {
  CHECK(gsirs::dfe(fixtures::example_params()) == State{50.0, 0.0, 0.0});
  CHECK(gsirs::dfe(ModelParams(0.3, 0.3, 0, 0, 0, 0)) == State{1.0, 0.0, 0.0});
  CHECK(gsirs::dfe(ModelParams(7.5, 0.3, 0, 0, 0, 0)).S == doctest::Approx(25.0));
}

TEST_CASE("dfe is an equilibrium for every incidence vanishing at I = 0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rate(0.01, 1.0);
  for (int k = 0; k < 200; ++k) {
    const ModelParams p(rate(rng) * 10, rate(rng), rate(rng), rate(rng), rate(rng), rate(rng));
    const auto f = gsirs::make_builtin(gsirs::Family::saturated_in_I,
                                       {{"beta", rate(rng)}, {"a", rate(rng)}});
    CHECK(gsirs::vector_field(p, f, gsirs::dfe(p)).max_abs() <= 1e-12);
  }
}

TEST_CASE("r0 reproduces the worked-example thresholds") {
  const auto p = fixtures::example_params();
  CHECK(std::abs(gsirs::r0(p, fixtures::power_k(0.0002)) - 0.7143) < 1e-4);
  CHECK(std::abs(gsirs::r0(p, fixtures::power_k(0.0008)) - 2.8571) < 1e-4);
  CHECK(gsirs::r0(p, fixtures::power_k(0.0002)) == doctest::Approx(5.0 / 7.0).epsilon(1e-14));
  CHECK(gsirs::r0(p, fixtures::power_k(0.0008)) == doctest::Approx(20.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("r0 equals one at the threshold beta") {
  const auto p = fixtures::example_params();
  const double beta = p.mu() * p.infective_exit_rate() / p.Lambda();
  CHECK(gsirs::r0_from_beta(p, beta) == doctest::Approx(1.0).epsilon(1e-15));
  const auto f = gsirs::make_builtin(gsirs::Family::bilinear, {{"beta", beta}});
  CHECK(gsirs::r0(p, f) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("r0 is monotone in beta and in each loss rate") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rate(0.05, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double L = 10 * rate(rng), mu = rate(rng), g1 = rate(rng), g2 = rate(rng),
                 a = rate(rng), d = rate(rng), beta = rate(rng);
    const ModelParams base(L, mu, g1, g2, a, d);
    const double r = gsirs::r0_from_beta(base, beta);
    CHECK(gsirs::r0_from_beta(base, beta * 1.1) > r);
    CHECK(gsirs::r0_from_beta(ModelParams(L, mu * 1.1, g1, g2, a, d), beta) < r);
    CHECK(gsirs::r0_from_beta(ModelParams(L, mu, g1 * 1.1, g2, a, d), beta) < r);
    CHECK(gsirs::r0_from_beta(ModelParams(L, mu, g1, g2 * 1.1, a, d), beta) < r);
    CHECK(gsirs::r0_from_beta(ModelParams(L, mu, g1, g2, a * 1.1, d), beta) < r);
  }
}

TEST_CASE("in_omega checks non-negativity and the population cap") {
  const auto p = fixtures::example_params();
  CHECK(gsirs::in_omega(p, State{50.0, 0.0, 0.0}, 0.0));
  CHECK_FALSE(gsirs::in_omega(p, State{50.0, 1.0, 0.0}, 1e-9));
  CHECK(gsirs::in_omega(p, fixtures::kE1Rounded));
  CHECK_FALSE(gsirs::in_omega(p, State{-1e-6, 1.0, 1.0}));
  CHECK(gsirs::in_omega(p, State{-1e-10, 1.0, 1.0}));
}

TEST_CASE("max_norm_distance") {
  CHECK(gsirs::max_norm_distance(State{1, 2, 3}, State{1.5, 0, 3}) == 2.0);
}
