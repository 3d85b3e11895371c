#include "polykin/cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polykin/fileio.hpp"
#include "polykin/fitlab.hpp"
#include "polykin/hypotheses.hpp"
#include "polykin/io_json.hpp"
#include "polykin/operator.hpp"
#include "polykin/relax.hpp"

namespace polykin {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CheckArgs {
  std::optional<double> delta, zeta;
  double zeta1 = 0.0, zeta2 = 0.0;
  std::vector<double> deltas;
  std::vector<std::string> hyps{"H2", "H3"};
  bool extended = false;
  std::vector<double> psi;
  std::string bound = "e_power";
};

struct DiagArgs {
  std::string kind;
  double delta = 0.0, zeta = 0.0;
  std::size_t grid = 6, grid_I = 4;
  bool refine = false;
  std::uint64_t seed = 1;
  std::vector<double> psi;
  std::string out;
};

struct RelaxArgs {
  std::string config;
  std::optional<double> t_end;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> N;
  std::string out = "relax_timeseries.csv";
  std::string summary;
};

struct FitArgs {
  std::string manifest;
  std::string out;
  std::string export_dir;
};

double need(const std::optional<double>& x, const char* flag, std::string_view hyp) {
  if (!x) throw UsageError(std::string(hyp) + " needs " + flag);
  return *x;
}

PsiFunction psi_from_flag(const std::vector<double>& p) {
  if (p.empty()) return PsiFunction::unit();
  if (p.size() != 3) throw UsageError("--psi expects r_sym,R,one_minus_R");
  return PsiFunction::power({p[0], p[1], p[2]});
}

void require_finite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw UsageError("numeric flags must be finite");
  }
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  std::vector<HypothesisId> ids;
  for (const auto& h : a.hyps) {
    const auto id = parse_hypothesis(h);
    if (!id) throw UsageError("unknown hypothesis '" + h + "' (expected H1..H7)");
    ids.push_back(*id);
  }
  if (a.delta) require_finite({*a.delta});
  if (a.zeta) require_finite({*a.zeta});
  require_finite({a.zeta1, a.zeta2});
  if (a.bound != "e_power" && a.bound != "speed") throw UsageError("--bound expects e_power or speed");

  std::vector<ojson> lines;
  for (const auto id : ids) {
    const auto name = hypothesis_name(id);
    switch (id) {
      case HypothesisId::H1_monatomic:
        lines.push_back(to_json(check_monatomic(need(a.zeta, "--zeta", name),
                                                a.bound == "speed" ? MonatomicBound::SpeedBound : MonatomicBound::EPower)));
        break;
      case HypothesisId::H2_single_BL:
      case HypothesisId::H3_single_Psi: {
        SingleOptions opts;
        opts.extended_zeta_interval = a.extended;
        opts.psi = psi_from_flag(a.psi);
        const double delta = need(a.delta, "--delta", name);
        if (!(delta > 0.0)) throw UsageError("--delta must be positive");
        lines.push_back(to_json(check_single(delta, need(a.zeta, "--zeta", name), id, opts)));
        break;
      }
      case HypothesisId::H4_resonant: {
        const double delta = need(a.delta, "--delta", name);
        if (!(delta > 0.0)) throw UsageError("--delta must be positive");
        lines.push_back(to_json(check_resonant(delta, need(a.zeta, "--zeta", name), a.zeta1, a.zeta2)));
        break;
      }
      case HypothesisId::H5_discrete: lines.push_back(to_json(check_discrete(need(a.zeta, "--zeta", name)))); break;
      case HypothesisId::H6_mixture_BL:
      case HypothesisId::H7_mixture_Psi: {
        std::vector<double> deltas = a.deltas;
        if (deltas.empty() && a.delta) deltas = {*a.delta};
        if (deltas.empty()) throw UsageError(std::string(name) + " needs --deltas");
        for (double d : deltas) require_finite({d});
        const double z = need(a.zeta, "--zeta", name);
        const std::vector<std::vector<double>> zetas(deltas.size(), std::vector<double>(deltas.size(), z));
        std::vector<std::vector<PsiExponents>> psi;
        if (!a.psi.empty()) {
          const auto p = psi_from_flag(a.psi);
          psi.assign(deltas.size(), std::vector<PsiExponents>(deltas.size(), *p.exponents()));
        }
        for (const auto& pv : check_mixture(deltas, zetas, id, psi)) lines.push_back(to_json(pv));
        break;
      }
    }
  }
  for (const auto& l : lines) out << l.dump() << '\n';
  return kExitOk;
}

int cmd_diag(const DiagArgs& a, std::ostream& out) {
  require_finite({a.delta, a.zeta});
  if (!(a.delta > 0.0)) throw UsageError("--delta must be positive");
  std::ostringstream csv;
  csv << "# seed=" << a.seed << '\n';
  ojson summary;
  summary["command"] = "diag";
  summary["kind"] = a.kind;
  summary["delta"] = a.delta;
  summary["zeta"] = a.zeta;
  summary["seed"] = a.seed;
  std::string path = a.out;
  if (a.kind == "k2") {
    const auto d = k2_integrability_diagnostic(a.delta, a.zeta, psi_from_flag(a.psi));
    write_k2_csv(csv, d);
    const ojson dj = to_json(d);
    for (const auto& [k, v] : dj.items()) {
      if (k != "kind") summary[k] = v;
    }
    if (path.empty()) path = "k2_diagnostic.csv";
  } else if (a.kind == "k1norm") {
    if (a.grid < 1 || a.grid_I < 1) throw UsageError("--grid and --grid-I must be positive");
    const auto spec = MixtureSpec::single(Species{"gas", 1.0, ContinuousPowerLaw{a.delta}}, PowerLawE{1.0, a.zeta});
    const Maxwellian M(spec, EquilibriumParams::single(1.0, Vec3{}, 1.0), Family::BorgnakkeLarsen);
    const auto K = assemble_K1({a.grid, a.grid_I}, M, spec.kernel(0, 0));
    write_k1_csv(csv, K);
    summary["grid"] = {a.grid, a.grid_I};
    summary["nodes"] = K.size();
    summary["hs_norm"] = K.hs_norm();
    summary["symmetry_defect"] = K.symmetry_defect();
    if (a.refine) {
      const auto K2 = assemble_K1({a.grid + 2, a.grid_I + 2}, M, spec.kernel(0, 0));
      summary["refined_grid"] = {a.grid + 2, a.grid_I + 2};
      summary["refined_hs_norm"] = K2.hs_norm();
      summary["relative_change"] = std::abs(K2.hs_norm() - K.hs_norm()) / K2.hs_norm();
    }
    if (path.empty()) path = "k1_rows.csv";
  } else {
    throw UsageError("--kind expects k2 or k1norm");
  }
  write_file_atomic(path, csv.str());
  summary["output"] = path;
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_relax(const RelaxArgs& a, std::ostream& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(a.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(a.config + ": " + e.what());
  }
  auto job = relax_job_from_json(j);
  if (a.t_end) {
    require_finite({*a.t_end});
    if (!(*a.t_end >= 0.0)) throw UsageError("--t-end must be nonnegative");
    job.t_end = *a.t_end;
  }
  if (a.seed) job.config.seed = *a.seed;
  if (a.N) {
    if (*a.N < 2) throw UsageError("--N must be at least 2");
    job.N = *a.N;
  }
  Ensemble ens = init_ensemble(job.spec, job.N, job.T_kin0, job.T_int0, job.u0, job.config.seed, job.composition);
  const auto res = run(ens, job.config, job.t_end);

  std::ostringstream csv;
  write_time_series_csv(csv, res.series);
  write_file_atomic(a.out, csv.str());
  ojson summary;
  summary["command"] = "relax";
  summary["config"] = a.config;
  summary["N"] = job.N;
  summary["t_end"] = job.t_end;
  const ojson sj = to_json(res.summary, job.config.seed);
  for (const auto& [k, v] : sj.items()) summary[k] = v;
  summary["output"] = a.out;
  if (!a.summary.empty()) write_file_atomic(a.summary, summary.dump(2) + "\n");
  out << summary.dump() << '\n';
  return kExitOk;
}

ojson fits_json(const std::vector<Table1Fit>& fits) {
  ojson arr = ojson::array();
  for (const auto& f : fits) arr.push_back(to_json(f));
  return arr;
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto fits = fit_datasets(read_manifest(a.manifest));
  const std::string path = a.out.empty() ? "fit_report.csv" : a.out;
  std::ostringstream csv;
  write_report_csv(csv, fits);
  write_file_atomic(path, csv.str());
  ojson summary;
  summary["command"] = "fit";
  summary["manifest"] = a.manifest;
  summary["report"] = path;
  summary["rows"] = fits_json(fits);
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_table1(const FitArgs& a, std::ostream& out) {
  const auto synthetic = synthetic_table1_dataset();
  if (!a.export_dir.empty()) write_dataset(a.export_dir, synthetic);
  const auto data = a.manifest.empty() ? synthetic : read_manifest(a.manifest);
  const auto fits = reproduce_table1(data);
  const std::string path = a.out.empty() ? "table1_report.csv" : a.out;
  std::ostringstream csv;
  write_report_csv(csv, fits);
  write_file_atomic(path, csv.str());
  ojson verdicts = ojson::array();
  for (const auto& r : table1_report()) verdicts.push_back(to_json(r));
  ojson summary;
  summary["command"] = "table1";
  summary["source"] = a.manifest.empty() ? std::string("synthetic") : a.manifest;
  summary["report"] = path;
  summary["verdicts"] = verdicts;
  summary["fits"] = fits_json(fits);
  out << summary.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polyatomic Boltzmann collision models: hypothesis checks, diagnostics, relaxation and fits", "polykin"};
  app.require_subcommand(1, 1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Verdicts for the kernel hypotheses H1..H7");
  c->add_option("--delta", check.delta, "internal degrees-of-freedom parameter");
  c->add_option("--zeta", check.zeta, "kernel exponent, B = C E^{zeta/2}");
  c->add_option("--zeta1", check.zeta1, "angular exponent (H4)");
  c->add_option("--zeta2", check.zeta2, "internal-energy exponent (H4)");
  c->add_option("--deltas", check.deltas, "per-species delta for H6/H7 (0 = monatomic)")->delimiter(',');
  c->add_option("--hyp", check.hyps, "comma-separated hypotheses, e.g. H2,H3")->delimiter(',');
  c->add_flag("--extended", check.extended, "H2: accept -1 < zeta <= delta + 1");
  c->add_option("--psi", check.psi, "power-form Psi exponents r_sym,R,one_minus_R")->delimiter(',');
  c->add_option("--bound", check.bound, "H1 kernel form: e_power or speed");

  DiagArgs diag;
  auto* d = app.add_subcommand("diag", "k2 integrability or K1 matrix diagnostics");
  d->add_option("--kind", diag.kind, "k2 or k1norm")->required();
  d->add_option("--delta", diag.delta)->required();
  d->add_option("--zeta", diag.zeta)->required();
  d->add_option("--grid", diag.grid, "velocity nodes per component (k1norm)");
  d->add_option("--grid-I", diag.grid_I, "internal-energy nodes (k1norm)");
  d->add_flag("--refine", diag.refine, "also assemble on the next grid and report the change");
  d->add_option("--psi", diag.psi, "power-form Psi exponents r_sym,R,one_minus_R")->delimiter(',');
  d->add_option("--seed", diag.seed);
  d->add_option("--out", diag.out, "CSV output path");

  RelaxArgs relax;
  auto* r = app.add_subcommand("relax", "Homogeneous relaxation by particle simulation");
  r->add_option("--config", relax.config, "JSON configuration")->required();
  r->add_option("--t-end", relax.t_end);
  r->add_option("--seed", relax.seed);
  r->add_option("--N", relax.N, "particle count override");
  r->add_option("--out", relax.out, "time-series CSV path");
  r->add_option("--summary", relax.summary, "also write the summary JSON here");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit delta and zeta from c_v and viscosity data");
  f->add_option("--manifest", fit.manifest)->required();
  f->add_option("--out", fit.out, "report CSV path");

  FitArgs t1;
  auto* t = app.add_subcommand("table1", "Reference gas parameters: verdicts and fits");
  t->add_option("--manifest", t1.manifest, "measured data instead of the bundled synthetic set");
  t->add_option("--out", t1.out, "report CSV path");
  t->add_option("--export-data", t1.export_dir, "write the synthetic dataset to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "polykin: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*c) return cmd_check(check, out);
    if (*d) return cmd_diag(diag, out);
    if (*r) return cmd_relax(relax, out);
    if (*f) return cmd_fit(fit, out);
    if (*t) return cmd_table1(t1, out);
  } catch (const MajorantViolation& e) {
    err << "polykin: numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "polykin: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const MissingEntry& e) {
    err << "polykin: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "polykin: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "polykin: numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace polykin
