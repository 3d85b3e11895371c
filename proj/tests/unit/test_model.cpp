#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "polykin/model.hpp"

using namespace polykin;

TEST_CASE("phi weight is a power of the internal energy") {
  CHECK(phi_weight(4.0, 3.0) == doctest::Approx(2.0));
  CHECK(phi_weight(2.5, 2.0) == 1.0);
  CHECK_THROWS_AS((void)phi_weight(0.0, 1.5), std::domain_error);
}

TEST_CASE("power-law kernel in the total energy") {
  CollisionContext ctx;
  ctx.E = 4.0;
  CHECK(eval_kernel(PowerLawE{2.0, 0.5}, ctx) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(eval_kernel(PowerLawE{1.0, 0.0}, ctx) == 1.0);
  ctx.E = -1.0;
  CHECK_THROWS_AS((void)eval_kernel(PowerLawE{}, ctx), std::domain_error);
}

TEST_CASE("psi weighted kernel multiplies by psi") {
  CollisionContext ctx;
  ctx.E = 1.0;
  ctx.r = 0.25;
  ctx.R = 0.5;
  const PsiWeighted k{1.0, 0.0, PsiFunction::power({1.0, 1.0, 0.0})};
  CHECK(eval_kernel(k, ctx) == doctest::Approx(0.25 * 0.75 * 0.5));
}

TEST_CASE("psi symmetry detection") {
  CHECK(is_symmetric(PsiFunction::unit()));
  CHECK(is_symmetric(PsiFunction::power({0.5, 1.0, 2.0})));
  CHECK_FALSE(is_symmetric(PsiFunction::custom("r", [](double r, double) { return r; })));
  CHECK(is_symmetric(PsiFunction::custom("sym", [](double r, double R) { return r * (1 - r) + R; })));
}

TEST_CASE("validate reports every violation") {
  const auto good = MixtureSpec::single({"a", 1.0, ContinuousPowerLaw{2.0}}, PowerLawE{1.0, 0.5});
  CHECK(validate(good).empty());

  MixtureSpec bad;
  bad.species = {{"a", -1.0, ContinuousPowerLaw{0.0}}, {"b", 1.0, DiscreteLevels{{{1.0, 1.0}, {0.5, 1.0}}}}};
  bad.kernels = {{PowerLawE{1.0, 0.0}, PowerLawE{1.0, 0.5}}, {PowerLawE{1.0, 0.0}, PowerLawE{1.0, 0.0}}};
  const auto v = validate(bad);
  CHECK(v.size() >= 4);

  MixtureSpec empty;
  CHECK_FALSE(validate(empty).empty());
}

TEST_CASE("resonant sphere integrals match quadrature") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double pi = std::numbers::pi;
  for (double zeta1 : {0.0, 0.2, 0.45}) {
    ResonantTensored k;
    k.zeta1 = zeta1;
    k.kin_terms = {KinTerm::InverseSinPower};
    const double oracle = 2 * pi * ts.integrate([&](double c) { return std::pow(1 - c * c, -0.5 * zeta1); }, -1.0, 1.0);
    CHECK(resonant_kin_sphere_integral(k, 1.7) == doctest::Approx(oracle).epsilon(1e-10));
  }
  ResonantTensored k;
  k.kin_terms = {KinTerm::SinSpeed, KinTerm::Speed};
  const double V = 0.8;
  const double sin_part = 2 * pi * ts.integrate([](double c) { return std::sqrt(1 - c * c); }, -1.0, 1.0);
  CHECK(resonant_kin_sphere_integral(k, V) == doctest::Approx(sin_part * (V * V + 1 / V) + 4 * pi * V).epsilon(1e-10));
}

TEST_CASE("reduced mass") {
  CHECK(reduced_mass(1.0, 1.0) == 0.5);
  CHECK(reduced_mass(2.0, 6.0) == doctest::Approx(1.5));
}
