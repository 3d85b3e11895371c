#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "polykin/cli.hpp"

using namespace polykin;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polykin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("polykin_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kConfig = R"({
  "species": [{"label": "A", "mass": 1.0, "energy": {"kind": "continuous", "delta": 2.0}}],
  "kernel": {"kind": "power_law_e", "C": 1.0, "zeta": 0.5},
  "relax": {"N": 3000, "T_kin0": 2.0, "T_int0": 1.0, "t_end": 0.5, "seed": 9, "sample_every": 5}
})";

}  // namespace

TEST_CASE("check prints one verdict per hypothesis") {
  const auto r = cli({"check", "--delta", "2.017", "--zeta", "0.537", "--hyp", "H2,H3"});
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string a, b;
  std::getline(lines, a);
  std::getline(lines, b);
  const auto h2 = nlohmann::json::parse(a), h3 = nlohmann::json::parse(b);
  CHECK(h2["hypothesis"] == "H2_single_BL");
  CHECK(h2["satisfied"] == true);
  CHECK(h3["satisfied"] == false);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({"check", "--hyp", "H9"}).code == kExitUsage);
  CHECK(cli({"check", "--delta", "nan", "--zeta", "0.5"}).code == kExitUsage);
  CHECK(cli({"bogus"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"diag", "--kind", "k3", "--delta", "3", "--zeta", "0.5"}).code == kExitUsage);
}

TEST_CASE("diag writes the CSV and is reproducible") {
  const auto dir = scratch_dir("diag");
  const auto r1 = cli({"diag", "--kind", "k2", "--delta", "3", "--zeta", "0.5", "--seed", "4", "--out", (dir / "a.csv").string()});
  const auto r2 = cli({"diag", "--kind", "k2", "--delta", "3", "--zeta", "0.5", "--seed", "4", "--out", (dir / "b.csv").string()});
  REQUIRE(r1.code == kExitOk);
  CHECK(nlohmann::json::parse(r1.out)["verdict"] == "integrable");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv").rfind("# seed=4", 0) == 0);

  const auto d = cli({"diag", "--kind", "k2", "--delta", "2.017", "--zeta", "0.537", "--out", (dir / "c.csv").string()});
  CHECK(nlohmann::json::parse(d.out)["verdict"] == "divergent");

  CHECK(cli({"diag", "--kind", "k2", "--delta", "3", "--zeta", "0.5", "--out", (dir / "missing" / "x.csv").string()}).code ==
        kExitIo);
  std::filesystem::remove_all(dir);
}

TEST_CASE("relax exit codes and determinism") {
  const auto dir = scratch_dir("relax");
  std::ofstream(dir / "cfg.json") << kConfig;
  const auto a = cli({"relax", "--config", (dir / "cfg.json").string(), "--out", (dir / "a.csv").string()});
  const auto b = cli({"relax", "--config", (dir / "cfg.json").string(), "--out", (dir / "b.csv").string()});
  REQUIRE(a.code == kExitOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv").rfind("# seed=9\nt,T_kin,T_int,mean_I,H,collisions\n", 0) == 0);
  const auto s = nlohmann::json::parse(a.out);
  CHECK(s["seed"] == 9);
  CHECK(s["energy_ok"] == true);

  CHECK(cli({"relax", "--config", (dir / "none.json").string()}).code == kExitIo);

  auto bad = nlohmann::json::parse(kConfig);
  bad["relax"]["N"] = "many";
  std::ofstream(dir / "bad.json") << bad.dump();
  CHECK(cli({"relax", "--config", (dir / "bad.json").string(), "--out", (dir / "x.csv").string()}).code == kExitUsage);

  auto tiny = nlohmann::json::parse(kConfig);
  tiny["relax"]["B_maj"] = {1e-3};
  std::ofstream(dir / "tiny.json") << tiny.dump();
  const auto abort = cli({"relax", "--config", (dir / "tiny.json").string(), "--out", (dir / "y.csv").string()});
  CHECK(abort.code == kExitNumerical);
  CHECK_FALSE(abort.err.empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("fit and table1") {
  const auto dir = scratch_dir("fit");
  const auto t = cli({"table1", "--out", (dir / "t1.csv").string(), "--export-data", (dir / "data").string()});
  REQUIRE(t.code == kExitOk);
  const auto j = nlohmann::json::parse(t.out);
  CHECK(j["verdicts"].size() == 8);
  CHECK(j["fits"].size() == 8);

  const auto f = cli({"fit", "--manifest", (dir / "data" / "manifest.json").string(), "--out", (dir / "fit.csv").string()});
  REQUIRE(f.code == kExitOk);
  const auto rows = nlohmann::json::parse(f.out)["rows"];
  CHECK(rows[0]["gas"] == "N2");
  CHECK(rows[0]["delta"]["value"].get<double>() == doctest::Approx(2.017));

  std::ofstream(dir / "bad.json") << "{\"entries\": [{\"gas\": 3}]}";
  CHECK(cli({"fit", "--manifest", (dir / "bad.json").string()}).code == kExitUsage);
  CHECK(cli({"fit", "--manifest", (dir / "none.json").string()}).code == kExitIo);
  std::filesystem::remove_all(dir);
}
