#include "polykin/io_json.hpp"

#include <array>
#include <cmath>
#include <set>

namespace polykin {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<KinTerm, const char*>, 4> kKinTerms{{
    {KinTerm::Speed, "speed"},
    {KinTerm::SinSpeed, "sin_speed"},
    {KinTerm::InverseSpeedPower, "inverse_speed_power"},
    {KinTerm::InverseSinPower, "inverse_sin_power"},
}};

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw SchemaError(where + ": unknown field '" + k + "'");
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing '" + key + "'");
  const auto& v = j[key];
  if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(where + "." + key + ": must be finite");
  return x;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::uint64_t unsigned_or(const json& j, const char* key, std::uint64_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError(where + "." + key + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing '" + key + "'");
  if (!j[key].is_string()) throw SchemaError(where + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw SchemaError(where + ": expected finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

EnergyModel energy_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string kind = string(j, "kind", where);
  if (kind == "monatomic") {
    require_object(j, where, {"kind"});
    return Monatomic{};
  }
  if (kind == "continuous") {
    require_object(j, where, {"kind", "delta"});
    return ContinuousPowerLaw{number(j, "delta", where)};
  }
  if (kind == "discrete") {
    require_object(j, where, {"kind", "levels"});
    if (!j.contains("levels") || !j["levels"].is_array()) throw SchemaError(where + ".levels: expected an array");
    DiscreteLevels d;
    std::size_t k = 0;
    for (const auto& lv : j["levels"]) {
      const std::string w = where + ".levels[" + std::to_string(k++) + "]";
      require_object(lv, w, {"energy", "degeneracy"});
      d.levels.push_back({number(lv, "energy", w), number_or(lv, "degeneracy", 1.0, w)});
    }
    return d;
  }
  throw SchemaError(where + ".kind: unknown energy kind '" + kind + "'");
}

KernelModel kernel_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string kind = string(j, "kind", where);
  if (kind == "power_law_e") {
    require_object(j, where, {"kind", "C", "zeta"});
    return PowerLawE{number_or(j, "C", 1.0, where), number(j, "zeta", where)};
  }
  if (kind == "psi_weighted") {
    require_object(j, where, {"kind", "C", "zeta", "psi"});
    PsiExponents e;
    if (j.contains("psi")) {
      const auto& p = j["psi"];
      require_object(p, where + ".psi", {"r_sym", "R", "one_minus_R"});
      e = {number_or(p, "r_sym", 0.0, where + ".psi"), number_or(p, "R", 0.0, where + ".psi"),
           number_or(p, "one_minus_R", 0.0, where + ".psi")};
    }
    return PsiWeighted{number_or(j, "C", 1.0, where), number(j, "zeta", where), PsiFunction::power(e)};
  }
  if (kind == "resonant_tensored") {
    require_object(j, where, {"kind", "C", "zeta", "zeta1", "zeta2", "kin_terms"});
    ResonantTensored k;
    k.C = number_or(j, "C", 1.0, where);
    k.zeta = number_or(j, "zeta", 0.0, where);
    k.zeta1 = number_or(j, "zeta1", 0.0, where);
    k.zeta2 = number_or(j, "zeta2", 0.0, where);
    if (j.contains("kin_terms")) {
      if (!j["kin_terms"].is_array()) throw SchemaError(where + ".kin_terms: expected an array");
      k.kin_terms.clear();
      for (const auto& t : j["kin_terms"]) {
        if (!t.is_string()) throw SchemaError(where + ".kin_terms: expected strings");
        const auto name = t.get<std::string>();
        bool found = false;
        for (const auto& [term, n] : kKinTerms) {
          if (name == n) {
            k.kin_terms.push_back(term);
            found = true;
          }
        }
        if (!found) throw SchemaError(where + ".kin_terms: unknown term '" + name + "'");
      }
    }
    return k;
  }
  throw SchemaError(where + ".kind: unknown kernel kind '" + kind + "'");
}

MixtureSpec spec_from_json(const json& j) {
  require_object(j, "spec", {"species", "kernel", "kernels", "units"});
  if (!j.contains("species") || !j["species"].is_array() || j["species"].empty()) {
    throw SchemaError("species: expected a nonempty array");
  }
  MixtureSpec spec;
  std::size_t i = 0;
  for (const auto& s : j["species"]) {
    const std::string w = "species[" + std::to_string(i++) + "]";
    require_object(s, w, {"label", "mass", "energy"});
    Species sp;
    sp.label = s.contains("label") ? string(s, "label", w) : "s" + std::to_string(i);
    sp.mass = number_or(s, "mass", 1.0, w);
    if (!s.contains("energy")) throw SchemaError(w + ": missing 'energy'");
    sp.energy = energy_from_json(s["energy"], w + ".energy");
    spec.species.push_back(std::move(sp));
  }
  const std::size_t n = spec.size();
  if (j.contains("kernel") == j.contains("kernels")) throw SchemaError("spec: give exactly one of 'kernel' or 'kernels'");
  if (j.contains("kernel")) {
    const auto k = kernel_from_json(j["kernel"]);
    spec.kernels.assign(n, std::vector<KernelModel>(n, k));
  } else {
    const auto& m = j["kernels"];
    if (!m.is_array() || m.size() != n) throw SchemaError("kernels: expected an n x n array");
    for (std::size_t a = 0; a < n; ++a) {
      if (!m[a].is_array() || m[a].size() != n) throw SchemaError("kernels: expected an n x n array");
      std::vector<KernelModel> row;
      for (std::size_t b = 0; b < n; ++b) {
        row.push_back(kernel_from_json(m[a][b], "kernels[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
      }
      spec.kernels.push_back(std::move(row));
    }
  }
  if (j.contains("units")) {
    require_object(j["units"], "units", {"k_B"});
    spec.units.k_B = number_or(j["units"], "k_B", 1.0, "units");
  }
  if (const auto v = validate(spec); !v.empty()) throw SchemaError(v.front().where + ": " + v.front().what);
  return spec;
}

ojson to_json(const EnergyModel& e) {
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) return {{"kind", "continuous"}, {"delta", c->delta}};
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) {
    ojson levels = ojson::array();
    for (const auto& lv : d->levels) levels.push_back({{"energy", lv.energy}, {"degeneracy", lv.degeneracy}});
    return {{"kind", "discrete"}, {"levels", levels}};
  }
  return {{"kind", "monatomic"}};
}

ojson to_json(const KernelModel& k) {
  if (const auto* p = std::get_if<PowerLawE>(&k)) return {{"kind", "power_law_e"}, {"C", p->C}, {"zeta", p->zeta}};
  if (const auto* p = std::get_if<PsiWeighted>(&k)) {
    ojson o{{"kind", "psi_weighted"}, {"C", p->C}, {"zeta", p->zeta}};
    if (const auto& e = p->psi.exponents()) {
      o["psi"] = {{"r_sym", e->r_sym}, {"R", e->R}, {"one_minus_R", e->one_minus_R}};
    } else {
      o["psi"] = p->psi.name();
    }
    return o;
  }
  const auto& r = std::get<ResonantTensored>(k);
  ojson terms = ojson::array();
  for (KinTerm t : r.kin_terms) {
    for (const auto& [term, n] : kKinTerms) {
      if (term == t) terms.push_back(n);
    }
  }
  return {{"kind", "resonant_tensored"}, {"C", r.C},         {"zeta", r.zeta},
          {"zeta1", r.zeta1},            {"zeta2", r.zeta2}, {"kin_terms", terms}};
}

ojson to_json(const MixtureSpec& s) {
  ojson species = ojson::array();
  for (const auto& sp : s.species) species.push_back({{"label", sp.label}, {"mass", sp.mass}, {"energy", to_json(sp.energy)}});
  ojson kernels = ojson::array();
  for (const auto& row : s.kernels) {
    ojson r = ojson::array();
    for (const auto& k : row) r.push_back(to_json(k));
    kernels.push_back(r);
  }
  return {{"species", species}, {"kernels", kernels}, {"units", {{"k_B", s.units.k_B}}}};
}

RelaxJob relax_job_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("config: expected an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "species" && k != "kernel" && k != "kernels" && k != "units" && k != "relax") {
      throw SchemaError("config: unknown field '" + k + "'");
    }
  }
  RelaxJob job;
  json spec_part = j;
  spec_part.erase("relax");
  job.spec = spec_from_json(spec_part);
  if (!j.contains("relax")) throw SchemaError("config: missing 'relax'");
  const auto& r = j["relax"];
  const std::string w = "relax";
  require_object(r, w,
                 {"N", "T_kin0", "T_int0", "u0", "dt", "t_end", "seed", "sample_every", "number_density", "composition",
                  "B_maj", "majorant_safety", "violation_tolerance"});
  job.N = unsigned_or(r, "N", job.N, w);
  if (job.N < 2) throw SchemaError("relax.N: at least 2");
  job.T_kin0 = number(r, "T_kin0", w);
  job.T_int0 = number_or(r, "T_int0", job.T_kin0, w);
  if (!(job.T_kin0 > 0.0 && job.T_int0 > 0.0)) throw SchemaError("relax: temperatures must be positive");
  if (r.contains("u0")) {
    const auto u = number_array(r["u0"], "relax.u0");
    if (u.size() != 3) throw SchemaError("relax.u0: expected three components");
    job.u0 = Vec3{u[0], u[1], u[2]};
  }
  job.t_end = number(r, "t_end", w);
  if (!(job.t_end >= 0.0)) throw SchemaError("relax.t_end: must be nonnegative");
  auto& c = job.config;
  c.dt = number_or(r, "dt", c.dt, w);
  if (!(c.dt > 0.0)) throw SchemaError("relax.dt: must be positive");
  c.seed = unsigned_or(r, "seed", c.seed, w);
  c.sample_every = unsigned_or(r, "sample_every", c.sample_every, w);
  if (c.sample_every == 0) throw SchemaError("relax.sample_every: must be positive");
  c.number_density = number_or(r, "number_density", c.number_density, w);
  if (!(c.number_density > 0.0)) throw SchemaError("relax.number_density: must be positive");
  if (r.contains("composition")) job.composition = number_array(r["composition"], "relax.composition");
  if (r.contains("B_maj")) {
    c.B_maj = number_array(r["B_maj"], "relax.B_maj");
    for (double b : c.B_maj) {
      if (!(b > 0.0)) throw SchemaError("relax.B_maj: entries must be positive");
    }
  }
  c.majorant_safety = number_or(r, "majorant_safety", c.majorant_safety, w);
  if (!(c.majorant_safety >= 1.0)) throw SchemaError("relax.majorant_safety: must be >= 1");
  c.violation_tolerance = number_or(r, "violation_tolerance", c.violation_tolerance, w);
  if (!(c.violation_tolerance >= 0.0)) throw SchemaError("relax.violation_tolerance: must be nonnegative");
  return job;
}

ojson number_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson to_json(const Verdict& v) {
  ojson margins = ojson::array();
  for (const auto& m : v.margins) {
    margins.push_back({{"condition", m.condition}, {"slack", number_or_null(m.slack)}, {"strict", m.strict}});
  }
  ojson o{{"hypothesis", hypothesis_name(v.hypothesis)},
          {"satisfied", v.satisfied},
          {"binding_condition", v.binding_condition},
          {"margins", margins},
          {"applicable", v.applicable}};
  if (!v.note.empty()) o["note"] = v.note;
  return o;
}

ojson to_json(const PairVerdict& v) {
  ojson o = to_json(v.verdict);
  o["pair"] = {v.i, v.j};
  return o;
}

ojson to_json(const Table1Row& r) {
  return {{"gas", r.entry.gas},
          {"pressure_bar", r.entry.pressure_bar},
          {"delta", r.entry.delta},
          {"zeta", r.entry.zeta},
          {"H2", to_json(r.h2)},
          {"H3", to_json(r.h3)}};
}

ojson to_json(const RelaxSummary& s, std::uint64_t seed) {
  return {{"seed", seed},
          {"T_eq", number_or_null(s.T_eq)},
          {"T_kin", number_or_null(s.T_kin)},
          {"T_int", number_or_null(s.T_int)},
          {"equipartition_gap", number_or_null(s.equipartition_gap)},
          {"equipartition_tolerance", kEquipartitionTolerance},
          {"equipartition_ok", s.equipartition_ok},
          {"mean_I_ratio", number_or_null(s.mean_I_ratio)},
          {"mean_I_ok", s.mean_I_ok},
          {"energy_drift", number_or_null(s.energy_drift)},
          {"energy_ok", s.energy_ok},
          {"momentum_drift", number_or_null(s.momentum_drift)},
          {"h_nonincreasing", s.h_nonincreasing},
          {"collision_rate", number_or_null(s.collision_rate)},
          {"collisions", s.collisions},
          {"candidates", s.candidates},
          {"majorant_violations", s.majorant_violations},
          {"max_relative_defect", number_or_null(s.max_relative_defect)}};
}

ojson to_json(const K2Diagnostic& d) {
  ojson exps = ojson::array();
  for (const auto& e : d.exponents) exps.push_back({{"factor", e.factor}, {"exponent", e.value}});
  ojson mirror = ojson::array();
  for (const auto& e : d.mirror_exponents) mirror.push_back({{"factor", e.factor}, {"exponent", e.value}});
  ojson o{{"kind", "k2"},
          {"verdict", integrability_name(d.verdict)},
          {"final_partial_integral", number_or_null(d.partial_integrals.empty() ? 0.0 : d.partial_integrals.back())},
          {"last_relative_change", number_or_null(d.last_relative_change)},
          {"numeric_integrable", d.numeric_integrable}};
  o["analytic_integrable"] = d.analytic_integrable ? ojson(*d.analytic_integrable) : ojson(nullptr);
  o["inconsistent"] = d.inconsistent;
  o["exponents"] = exps;
  o["mirror_exponents"] = mirror;
  return o;
}

ojson to_json(const FitResult& f) {
  return {{"value", number_or_null(f.value)},
          {"half_width", number_or_null(f.half_width)},
          {"polytropic", f.polytropic},
          {"max_relative_change", number_or_null(f.max_relative_change)},
          {"residual", number_or_null(f.residual)},
          {"warnings", f.warnings}};
}

ojson to_json(const Table1Fit& f) {
  return {{"gas", f.reference.gas},
          {"pressure_bar", f.reference.pressure_bar},
          {"delta", to_json(f.delta)},
          {"zeta", to_json(f.zeta)},
          {"delta_ref", number_or_null(f.reference.delta)},
          {"zeta_ref", number_or_null(f.reference.zeta)},
          {"zeta_chapman_cowling", number_or_null(f.reference.zeta_chapman_cowling)},
          {"delta_discrepancy", number_or_null(f.delta_discrepancy())},
          {"zeta_discrepancy", number_or_null(f.zeta_discrepancy())},
          {"zeta_cc_discrepancy", number_or_null(f.zeta_cc_discrepancy())},
          {"notes", f.notes}};
}

}  // namespace polykin
