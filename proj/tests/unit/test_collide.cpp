#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "../support/configs.hpp"
#include "polykin/collide.hpp"

using namespace polykin;

TEST_CASE("direction must be a unit vector") {
  CHECK_NOTHROW(Direction(Vec3{0.0, 0.0, 1.0}));
  CHECK_THROWS_AS(Direction(Vec3{0.0, 0.0, 1.1}), std::invalid_argument);
}

TEST_CASE("states must match the energy model") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{2.0}}, PowerLawE{});
  CHECK_NOTHROW(check_state(spec, ParticleState::continuous(0, {}, 1.0)));
  CHECK_THROWS_AS(check_state(spec, ParticleState::mono(0, {})), std::invalid_argument);
  CHECK_THROWS_AS(check_state(spec, ParticleState::level(0, {}, 0)), std::invalid_argument);
}

TEST_CASE("elastic rule keeps the relative speed") {
  const Vec3 v{1.0, 0.0, 0.0}, w{-1.0, 0.5, 0.0};
  const auto out = collide_monatomic(v, w, {0.0, 0.0, 1.0});
  CHECK((out[0] - out[1]).norm() == doctest::Approx((v - w).norm()));
  CHECK((out[0] + out[1] - v - w).norm() == doctest::Approx(0.0));
}

TEST_CASE("Borgnakke-Larsen split of the total energy") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{3.0}}, PowerLawE{});
  const StatePair pre{ParticleState::continuous(0, {1.0, 0.2, 0.0}, 0.7), ParticleState::continuous(0, {-0.3, 0.0, 0.4}, 1.1)};
  const double E = total_energy(spec, pre);
  const auto out = collide_borgnakke_larsen(spec, pre, BLParams{0.3, 0.6, Vec3{0.0, 1.0, 0.0}});
  REQUIRE(out.admissible);
  const double I = std::get<ContinuousEnergy>(out.post[0].internal).I;
  const double Is = std::get<ContinuousEnergy>(out.post[1].internal).I;
  CHECK(I == doctest::Approx(0.3 * 0.4 * E));
  CHECK(Is == doctest::Approx(0.7 * 0.4 * E));
  const Vec3 Vp = out.post[0].v - out.post[1].v;
  CHECK(0.25 * Vp.norm2() == doctest::Approx(0.6 * E));
  CHECK(Vp.y / Vp.norm() == doctest::Approx(1.0));
}

TEST_CASE("discrete transition above the kinetic budget is inadmissible") {
  const auto spec = testing::discrete_levels_spec();
  const StatePair pre{ParticleState::level(0, {0.1, 0.0, 0.0}, 0), ParticleState::level(0, {0.0, 0.0, 0.0}, 0)};
  const auto out = collide_discrete(spec, pre, DiscreteParams{3, 3, Vec3{1.0, 0.0, 0.0}});
  CHECK_FALSE(out.admissible);
  CHECK(out.post == pre);
  const auto down = collide_discrete(spec, StatePair{ParticleState::level(0, {}, 3), ParticleState::level(0, {}, 2)},
                                     DiscreteParams{0, 0, Vec3{1.0, 0.0, 0.0}});
  CHECK(down.admissible);
}

TEST_CASE("resonant rule conserves kinetic and internal energy separately") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{3.0}}, ResonantTensored{});
  const StatePair pre{ParticleState::continuous(0, {0.3, 0.1, -0.2}, 0.4), ParticleState::continuous(0, {-1.0, 0.5, 0.0}, 2.0)};
  const auto out = collide_resonant(spec, pre, ResonantParams{1.5, Vec3{0.6, 0.8, 0.0}});
  const auto d = invariant_defect(spec, pre, out.post);
  CHECK(d.relative_kinetic() < 1e-14);
  CHECK(d.relative_internal() < 1e-14);
  CHECK(std::get<ContinuousEnergy>(out.post[1].internal).I == doctest::Approx(0.9));
}

TEST_CASE("every family conserves momentum and energy") {
  for (const auto& c : testing::family_cases()) {
    CAPTURE(c.name);
    Rng rng = chunk_rng(5, 0);
    for (int n = 0; n < 20000; ++n) {
      const auto cfg = testing::random_configuration(c, rng);
      const auto out = collide(c.spec, cfg.pre, cfg.params);
      const auto d = invariant_defect(c.spec, cfg.pre, out.post);
      REQUIRE(d.relative_momentum() <= 1e-12);
      REQUIRE(d.relative_energy() <= 1e-12);
    }
  }
}

TEST_CASE("inverse parameters recover the drawn parameters") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{2.0}}, PowerLawE{});
  const StatePair pre{ParticleState::continuous(0, {0.5, 0.0, 0.1}, 0.3), ParticleState::continuous(0, {0.0, -0.7, 0.0}, 0.9)};
  const Vec3 sigma = Vec3{1.0, 2.0, 2.0} / 3.0;
  const auto out = collide_borgnakke_larsen(spec, pre, BLParams{0.2, 0.7, sigma});
  const auto inv = inverse_parameters(spec, out.post, pre);
  CHECK(inv.r == doctest::Approx(0.2));
  CHECK(inv.R == doctest::Approx(0.7));
  CHECK((inv.sigma - sigma).norm() < 1e-12);
  StatePair off = pre;
  off[0].v.x += 1.0;
  CHECK_THROWS_AS((void)inverse_parameters(spec, off, pre), std::invalid_argument);
}

TEST_CASE("phi ratio for a continuous pair") {
  const auto spec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{4.0}}, PowerLawE{});
  const StatePair pre{ParticleState::continuous(0, {}, 2.0), ParticleState::continuous(0, {}, 3.0)};
  const StatePair post{ParticleState::continuous(0, {}, 1.0), ParticleState::continuous(0, {}, 4.0)};
  CHECK(phi_ratio(spec, pre, post) == doctest::Approx(6.0 / 4.0));
}
