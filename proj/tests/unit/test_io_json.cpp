#include <doctest.h>

#include "polykin/io_json.hpp"

using namespace polykin;
using nlohmann::json;

TEST_CASE("spec parsing") {
  const auto j = json::parse(R"({
    "species": [{"label": "N2", "mass": 1.0, "energy": {"kind": "continuous", "delta": 2.017}}],
    "kernel": {"kind": "power_law_e", "C": 1.0, "zeta": 0.537}
  })");
  const auto spec = spec_from_json(j);
  CHECK(spec.size() == 1);
  CHECK(delta_of(spec.species[0].energy) == doctest::Approx(2.017));
  CHECK(std::get<PowerLawE>(spec.kernel(0, 0)).zeta == doctest::Approx(0.537));

  const auto back = spec_from_json(json::parse(to_json(spec).dump()));
  CHECK(back.species[0].label == "N2");
  CHECK(std::get<PowerLawE>(back.kernel(0, 0)) == std::get<PowerLawE>(spec.kernel(0, 0)));
}

TEST_CASE("schema violations") {
  CHECK_THROWS_AS((void)spec_from_json(json::parse(R"({"species": []})")), SchemaError);
  CHECK_THROWS_AS((void)spec_from_json(json::parse(
                      R"({"species": [{"energy": {"kind": "monatomic"}}], "kernel": {"kind": "power_law_e", "zeta": 0}, "extra": 1})")),
                  SchemaError);
  CHECK_THROWS_AS((void)spec_from_json(json::parse(
                      R"({"species": [{"energy": {"kind": "continuous"}}], "kernel": {"kind": "power_law_e", "zeta": 0}})")),
                  SchemaError);
  CHECK_THROWS_AS((void)spec_from_json(json::parse(
                      R"({"species": [{"energy": {"kind": "continuous", "delta": -1}}], "kernel": {"kind": "power_law_e", "zeta": 0}})")),
                  SchemaError);
  CHECK_THROWS_AS((void)spec_from_json(json::parse(
                      R"({"species": [{"energy": {"kind": "monatomic"}}], "kernel": {"kind": "unknown", "zeta": 0}})")),
                  SchemaError);
}

TEST_CASE("relax job") {
  const auto j = json::parse(R"({
    "species": [{"energy": {"kind": "continuous", "delta": 2}}],
    "kernel": {"kind": "power_law_e", "zeta": 0},
    "relax": {"N": 1000, "T_kin0": 2, "T_int0": 1, "t_end": 1, "seed": 5, "dt": 0.02}
  })");
  const auto job = relax_job_from_json(j);
  CHECK(job.N == 1000);
  CHECK(job.config.seed == 5);
  CHECK(job.config.dt == doctest::Approx(0.02));

  auto bad = j;
  bad["relax"]["dt"] = -1;
  CHECK_THROWS_AS((void)relax_job_from_json(bad), SchemaError);
  bad = j;
  bad["relax"]["bogus"] = 1;
  CHECK_THROWS_AS((void)relax_job_from_json(bad), SchemaError);
  bad = j;
  bad.erase("relax");
  CHECK_THROWS_AS((void)relax_job_from_json(bad), SchemaError);
}

TEST_CASE("verdict serialization keeps field order") {
  const auto v = to_json(check_single(2.017, 0.537, HypothesisId::H3_single_Psi));
  const std::string s = v.dump();
  CHECK(s.rfind("{\"hypothesis\":\"H3_single_Psi\",\"satisfied\":false,\"binding_condition\"", 0) == 0);
  CHECK(number_or_null(std::nan("")).is_null());
}
