#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polykin/fitlab.hpp"
#include "polykin/hypotheses.hpp"
#include "polykin/model.hpp"
#include "polykin/operator.hpp"
#include "polykin/relax.hpp"

namespace polykin {

using ojson = nlohmann::ordered_json;

/// Input that does not match the expected JSON layout.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Energy:  {"kind":"monatomic"} | {"kind":"continuous","delta"} |
//          {"kind":"discrete","levels":[{"energy","degeneracy"}]}
// Kernel:  {"kind":"power_law_e","C","zeta"} |
//          {"kind":"psi_weighted","C","zeta","psi":{"r_sym","R","one_minus_R"}} |
//          {"kind":"resonant_tensored","C","zeta","zeta1","zeta2","kin_terms":[...]}
// Spec:    {"species":[{"label","mass","energy"}], "kernel": K | "kernels": [[K]], "units":{"k_B"}}

[[nodiscard]] EnergyModel energy_from_json(const nlohmann::json& j, const std::string& where = "energy");
[[nodiscard]] KernelModel kernel_from_json(const nlohmann::json& j, const std::string& where = "kernel");
/// Validates the result; violations raise SchemaError.
[[nodiscard]] MixtureSpec spec_from_json(const nlohmann::json& j);

[[nodiscard]] ojson to_json(const EnergyModel& e);
[[nodiscard]] ojson to_json(const KernelModel& k);
[[nodiscard]] ojson to_json(const MixtureSpec& s);

/// Everything a relaxation run needs; the spec plus a "relax" section.
struct RelaxJob {
  MixtureSpec spec;
  RelaxConfig config;
  std::size_t N = 100000;
  double T_kin0 = 1.0;
  double T_int0 = 1.0;
  Vec3 u0;
  double t_end = 1.0;
  std::vector<double> composition;
};

[[nodiscard]] RelaxJob relax_job_from_json(const nlohmann::json& j);

[[nodiscard]] ojson to_json(const Verdict& v);
[[nodiscard]] ojson to_json(const PairVerdict& v);
[[nodiscard]] ojson to_json(const Table1Row& r);
[[nodiscard]] ojson to_json(const RelaxSummary& s, std::uint64_t seed);
[[nodiscard]] ojson to_json(const K2Diagnostic& d);
[[nodiscard]] ojson to_json(const FitResult& f);
[[nodiscard]] ojson to_json(const Table1Fit& f);

/// NaN and infinities become null.
[[nodiscard]] ojson number_or_null(double x);

}  // namespace polykin
