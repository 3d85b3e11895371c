#include <cmath>
#include <sstream>

#include <doctest.h>

#include "polykin/equilib.hpp"
#include "polykin/relax.hpp"

using namespace polykin;

namespace {
const MixtureSpec kSpec = MixtureSpec::single({"p", 1.0, ContinuousPowerLaw{2.0}}, PowerLawE{1.0, 0.5});
}

TEST_CASE("nonincreasing fit") {
  const std::vector<double> down{5, 4, 4, 3, 1};
  CHECK(nonincreasing_fit(down) == down);
  const auto f = nonincreasing_fit({1, 3, 2});
  CHECK(f[0] == doctest::Approx(2.0));
  CHECK(f[1] == doctest::Approx(2.0));
  CHECK(f[2] == doctest::Approx(2.0));
}

TEST_CASE("trend test") {
  std::vector<double> decay, rise;
  for (int i = 0; i < 60; ++i) {
    const double noise = 1e-3 * std::sin(1.7 * i);
    decay.push_back(std::exp(-0.1 * i) + noise);
    rise.push_back(-std::exp(-0.1 * i) + noise);
  }
  CHECK(trend_nonincreasing(decay));
  CHECK_FALSE(trend_nonincreasing(rise));
  CHECK(trend_noise(std::vector<double>(10, 2.0)) >= 0.0);
}

TEST_CASE("ensemble initialisation") {
  const auto ens = init_ensemble(kSpec, 20000, 2.0, 1.0, {0.5, 0.0, 0.0}, 3);
  CHECK(ens.size() == 20000);
  const auto m = ensemble_moments(ens);
  CHECK(m.T_kin == doctest::Approx(2.0).epsilon(0.03));
  CHECK(m.T_int == doctest::Approx(1.0).epsilon(0.03));
  CHECK(m.u.x == doctest::Approx(0.5).epsilon(0.03));
  CHECK(equilibrium_temperature(ens) == doctest::Approx((1.5 * m.T_kin + m.mean_I) / 2.5).epsilon(1e-6));
}

TEST_CASE("steps conserve energy and momentum") {
  auto ens = init_ensemble(kSpec, 4000, 2.0, 0.5, {}, 11);
  RelaxConfig cfg;
  prepare_majorants(ens, cfg);
  const auto before = ensemble_moments(ens);
  for (int i = 0; i < 50; ++i) step(ens, cfg);
  const auto after = ensemble_moments(ens);
  CHECK(ens.collisions > 0);
  CHECK(std::abs(after.total_energy - before.total_energy) <= 1e-12 * before.total_energy);
  CHECK((after.momentum - before.momentum).norm() <= 1e-12 * std::sqrt(before.total_energy * 4000));
  CHECK(ens.max_relative_defect <= 1e-12);
}

TEST_CASE("relaxation towards equipartition") {
  RelaxConfig cfg;
  cfg.seed = 4;
  cfg.sample_every = 20;
  const auto res = run(kSpec, cfg, 20000, 2.0, 1.0, 4.0);
  CHECK(res.summary.T_eq == doctest::Approx(1.6).epsilon(0.02));
  CHECK(res.summary.equipartition_gap <= 0.03);
  CHECK(res.summary.energy_drift <= 1e-10);
  CHECK(res.series.rows.front().t == 0.0);
  CHECK(res.series.rows.back().t == doctest::Approx(4.0));
  std::ostringstream os;
  write_time_series_csv(os, res.series);
  CHECK(os.str().find("t,T_kin,T_int,mean_I,H,collisions") != std::string::npos);
}

TEST_CASE("binary mixture with a monatomic partner") {
  MixtureSpec mix;
  mix.species = {{"p", 1.0, ContinuousPowerLaw{3.0}}, {"m", 2.0, Monatomic{}}};
  mix.kernels.assign(2, std::vector<KernelModel>(2, PowerLawE{1.0, 0.0}));
  RelaxConfig cfg;
  cfg.seed = 8;
  const auto res = run(mix, cfg, 10000, 1.0, 2.0, 3.0, {1.0, 1.0});
  CHECK(res.summary.energy_drift <= 1e-10);
  CHECK(res.summary.equipartition_gap <= 0.04);
}

TEST_CASE("undersized majorant aborts") {
  RelaxConfig cfg;
  cfg.B_maj = {1e-3};
  CHECK_THROWS_AS((void)run(kSpec, cfg, 2000, 2.0, 1.0, 0.5), MajorantViolation);
}

TEST_CASE("fixed seed gives identical time series") {
  RelaxConfig cfg;
  cfg.seed = 12;
  cfg.sample_every = 3;
  auto csv = [&] {
    std::ostringstream os;
    write_time_series_csv(os, run(kSpec, cfg, 3000, 1.5, 0.5, 0.3).series);
    return os.str();
  };
  const auto a = csv();
  CHECK(a == csv());
  cfg.seed = 13;
  CHECK(a != csv());
}

TEST_CASE("H estimate ranks a Maxwellian below a two-temperature state") {
  const auto eq = init_ensemble(kSpec, 50000, 1.6, 1.6, {}, 1);
  const auto off = init_ensemble(kSpec, 50000, 2.0, 1.0, {}, 1);
  CHECK(h_estimate(eq, 2.0, 1.0) < h_estimate(off, 2.0, 1.0));
}
