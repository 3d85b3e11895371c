#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "polykin/fitlab.hpp"

using namespace polykin;

namespace {

ViscositySeries power_series(double s, double a = 1.0, double T0 = 300.0, double T1 = 600.0) {
  ViscositySeries v;
  for (double T = T0; T <= T1 + 1e-9; T += 10.0) {
    v.T.push_back(T);
    v.mu.push_back(a * std::pow(T, s));
  }
  return v;
}

CvSeries constant_cv(double c) {
  CvSeries s;
  for (double T = 300.0; T <= 600.0; T += 50.0) {
    s.T.push_back(T);
    s.c_hat_v.push_back(c);
  }
  return s;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("polykin_fitlab_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("delta from a constant specific heat is exact") {
  const auto f = fit_delta(constant_cv(2.5085));
  CHECK(f.value == 2.0 * 2.5085 - 3.0);
  CHECK(f.residual == 0.0);
  CHECK(f.half_width == 0.0);
  CHECK(f.polytropic);

  const auto mono = fit_delta(constant_cv(1.5));
  CHECK(mono.value == 0.0);
  CHECK_FALSE(mono.warnings.empty());
}

TEST_CASE("a 6 percent spread is not polytropic") {
  CvSeries s{{300, 400, 500}, {2.5, 2.55, 2.65}};
  const auto f = fit_delta(s);
  CHECK_FALSE(f.polytropic);
  CHECK(f.max_relative_change == doctest::Approx(0.06));
  CHECK(f.half_width > 0.0);
}

TEST_CASE("zeta from pure power laws") {
  CHECK(fit_zeta(power_series(0.7315)).value == doctest::Approx(0.537).epsilon(1e-12));
  CHECK(std::abs(fit_zeta(power_series(0.5)).value - 1.0) <= 2e-12);
  CHECK(std::abs(fit_zeta(power_series(1.0)).value) <= 2e-12);
  for (double s : {0.6, 0.7, 0.738, 0.9}) {
    CHECK(std::abs(fit_zeta(power_series(s)).value - zeta_from_viscosity_exponent(s)) <= 2e-12);
  }
  CHECK(viscosity_exponent(0.524) == doctest::Approx(0.738));
}

TEST_CASE("zeta is invariant under rescaling mu and T") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  ViscositySeries noisy = power_series(0.7);
  std::normal_distribution<double> n(0.0, 0.01);
  for (auto& m : noisy.mu) m *= std::exp(n(rng));
  const double z0 = fit_zeta(noisy).value;
  for (int k = 0; k < 20; ++k) {
    const double a = u(rng), b = u(rng);
    ViscositySeries s = noisy;
    for (auto& m : s.mu) m *= a;
    for (auto& T : s.T) T *= b;
    CHECK(fit_zeta(s).value == doctest::Approx(z0).epsilon(1e-10));
  }
}

TEST_CASE("two-point fit warns about its confidence") {
  ViscositySeries s{{300, 600}, {1.0, 1.5}};
  const auto f = fit_zeta(s);
  CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("series are validated") {
  CHECK_THROWS_AS((void)fit_delta(CvSeries{}), DataFormatError);
  CHECK_THROWS_AS((void)fit_delta(CvSeries{{300, 300}, {2.5, 2.5}}), DataFormatError);
  CHECK_THROWS_AS((void)fit_delta(CvSeries{{300, 400}, {2.5, -1.0}}), DataFormatError);
  CHECK_THROWS_AS((void)fit_zeta(ViscositySeries{{300}, {1.0}}), DataFormatError);
  CHECK_THROWS_AS((void)fit_zeta(ViscositySeries{{300, 200}, {1.0, 1.0}}), DataFormatError);
}

TEST_CASE("synthetic data reproduce the reference table") {
  const auto fits = reproduce_table1(synthetic_table1_dataset());
  REQUIRE(fits.size() == 8);
  for (const auto& f : fits) {
    CAPTURE(f.reference.gas);
    CHECK(std::abs(f.delta_discrepancy()) <= 1e-12);
    CHECK(std::abs(f.zeta_discrepancy()) <= 1e-10);
  }
  CHECK(fits[2].reference.gas == "O2");
  CHECK(std::abs(fits[2].zeta_cc_discrepancy()) == doctest::Approx(0.011).epsilon(1e-6));
  CHECK(fits[7].delta.value == doctest::Approx(1.939));
  CHECK(fits[7].zeta.value == doctest::Approx(0.608));
}

TEST_CASE("missing entries are reported") {
  auto data = synthetic_table1_dataset();
  data.erase(data.begin());
  CHECK_THROWS_AS((void)reproduce_table1(data), MissingEntry);
}

TEST_CASE("restriction to the reference interval") {
  const auto s = restrict(power_series(0.7, 1.0, 200.0, 900.0), 300.0, 600.0);
  CHECK(s.T.front() == doctest::Approx(300.0));
  CHECK(s.T.back() == doctest::Approx(600.0));
}

TEST_CASE("datasets round-trip through files") {
  const auto dir = scratch_dir("roundtrip");
  const auto data = synthetic_table1_dataset();
  write_dataset(dir, data);
  const auto back = read_manifest(dir / "manifest.json");
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].gas == data[i].gas);
    CHECK(back[i].cv.T == data[i].cv.T);
    CHECK(back[i].viscosity.mu == data[i].viscosity.mu);
  }
  const auto fits = fit_datasets(back);
  std::ostringstream os;
  write_report_csv(os, fits);
  CHECK(os.str().rfind("species,T_min,T_max,pressure_bar,delta_fit", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed inputs") {
  const auto dir = scratch_dir("malformed");
  std::ofstream(dir / "bad.json") << "{\"entries\": 3}";
  CHECK_THROWS_AS((void)read_manifest(dir / "bad.json"), DataFormatError);
  std::ofstream(dir / "syntax.json") << "{";
  CHECK_THROWS_AS((void)read_manifest(dir / "syntax.json"), DataFormatError);
  std::ofstream(dir / "cv.csv") << "T,mu\n300,1\n";
  CHECK_THROWS_AS((void)read_cv_csv(dir / "cv.csv"), DataFormatError);
  std::ofstream(dir / "cv2.csv") << "# comment\nT,c_hat_v\n300,2.5\n400,2.5\n";
  CHECK(read_cv_csv(dir / "cv2.csv").size() == 2);
  CHECK_THROWS_AS((void)read_cv_csv(dir / "nope.csv"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown gases keep empty references") {
  GasDataset d{"Ar", 1.0, constant_cv(1.5), power_series(0.8)};
  const auto f = fit_datasets({d});
  REQUIRE(f.size() == 1);
  CHECK(std::isnan(f[0].reference.delta));
}
