#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "../support/configs.hpp"
#include "polykin/equilib.hpp"

using namespace polykin;

TEST_CASE("partition function of the power-law weight") {
  boost::math::quadrature::exp_sinh<double> es;
  for (double delta : {2.0, 2.5, 3.7}) {
    for (double T : {0.5, 1.3}) {
      const double oracle = es.integrate([&](double I) { return std::pow(I, 0.5 * delta - 1) * std::exp(-I / T); });
      CHECK(partition_function(ContinuousPowerLaw{delta}, T) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
  const DiscreteLevels d{{{0.0, 1.0}, {0.5, 3.0}}};
  CHECK(partition_function(d, 2.0) == doctest::Approx(1.0 + 3.0 * std::exp(-0.25)));
  CHECK(partition_function(Monatomic{}, 2.0) == 1.0);
}

TEST_CASE("resonant internal-energy convolution") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double delta : {2.0, 2.5, 3.7, 6.0}) {
    for (double Z : {0.3, 2.0}) {
      const double oracle = ts.integrate(
          [&](double I) { return std::pow(I, 0.5 * delta - 1) * std::pow(Z - I, 0.5 * delta - 1); }, 0.0, Z);
      CHECK(psi_res(Z, delta) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("Maxwellian integrates to the number density") {
  boost::math::quadrature::exp_sinh<double> es;
  const double delta = 2.6, T = 1.4, n = 2.5, m = 1.7;
  const auto spec = MixtureSpec::single({"p", m, ContinuousPowerLaw{delta}}, PowerLawE{});
  const Maxwellian M(spec, EquilibriumParams::single(n, {}, T), Family::BorgnakkeLarsen);
  const double total = es.integrate([&](double I) {
    return es.integrate([&](double v) {
      return 4 * std::numbers::pi * v * v * M(ParticleState::continuous(0, {v, 0.0, 0.0}, I));
    });
  });
  CHECK(total == doctest::Approx(n).epsilon(1e-8));

  const auto disc = testing::discrete_levels_spec();
  const Maxwellian Md(disc, EquilibriumParams::single(n, {}, T), Family::Discrete);
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    sum += es.integrate([&](double v) {
      return 4 * std::numbers::pi * v * v * Md(ParticleState::level(0, {v, 0.0, 0.0}, k));
    });
  }
  CHECK(sum == doctest::Approx(n).epsilon(1e-8));
}

TEST_CASE("moments of the Maxwellian") {
  const Species s{"p", 2.0, ContinuousPowerLaw{3.0}};
  const auto mom = equilibrium_moments(EquilibriumParams::single(1.5, {0.1, 0.2, 0.3}, 0.8), s);
  CHECK(mom.n == 1.5);
  CHECK(mom.T == doctest::Approx(0.8));
  CHECK(mom.velocity_variance == doctest::Approx(0.4));
  CHECK(mom.mean_internal == doctest::Approx(1.2));
  CHECK(mean_internal_energy(ContinuousPowerLaw{2.0}, 1.6) == doctest::Approx(1.6));
  const DiscreteLevels d{{{0.0, 1.0}, {1.0, 2.0}}};
  const double w = 2.0 * std::exp(-1.0);
  CHECK(mean_internal_energy(d, 1.0) == doctest::Approx(w / (1.0 + w)));
}

TEST_CASE("detailed balance holds for sampled collisions") {
  for (const auto& c : testing::family_cases()) {
    CAPTURE(c.name);
    const Maxwellian M(c.spec, c.eq, c.family);
    Rng rng = chunk_rng(9, 0);
    for (int i = 0; i < 5000; ++i) {
      const auto cfg = testing::random_configuration(c, rng);
      REQUIRE(detailed_balance_residual(M, cfg.pre, collide(c.spec, cfg.pre, cfg.params)).relative <= 1e-12);
    }
  }
}

TEST_CASE("two temperatures break detailed balance for the exchange rule") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{2.0}}, PowerLawE{});
  const Maxwellian M(spec, EquilibriumParams::two_temperature(1.0, {}, 1.0, 0.5), Family::BorgnakkeLarsen);
  const StatePair pre{ParticleState::continuous(0, {1.0, 0.0, 0.0}, 0.2), ParticleState::continuous(0, {}, 0.3)};
  const auto out = collide_borgnakke_larsen(spec, pre, BLParams{0.5, 0.1, Vec3{0.0, 0.0, 1.0}});
  CHECK(detailed_balance_residual(M, pre, out).relative > 1e-3);
}

TEST_CASE("family inference") {
  CHECK(family_of(MixtureSpec::single({"m", 1.0, Monatomic{}}, PowerLawE{})) == Family::Monatomic);
  CHECK(family_of(MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{}}, PowerLawE{}), true) == Family::Resonant);
  CHECK(family_of(testing::discrete_levels_spec()) == Family::Discrete);
  for (const auto& c : testing::family_cases()) {
    if (c.family != Family::Resonant) CHECK(family_of(c.spec) == c.family);
  }
}
