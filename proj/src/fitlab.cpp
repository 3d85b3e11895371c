#include "polykin/fitlab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace polykin {

namespace {

void check_increasing(const std::vector<double>& T, const std::vector<double>& y, const char* what) {
  if (T.size() != y.size()) throw DataFormatError(std::string(what) + ": column lengths differ");
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(std::isfinite(T[i]) && T[i] > 0.0)) throw DataFormatError(std::string(what) + ": temperatures must be positive");
    if (!(std::isfinite(y[i]) && y[i] > 0.0)) throw DataFormatError(std::string(what) + ": values must be positive");
    if (i > 0 && !(T[i] > T[i - 1])) throw DataFormatError(std::string(what) + ": temperatures must be strictly increasing");
  }
}

/// Mean as x0 + mean(x - x0), exact on constant input.
double shifted_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v - x.front();
  return x.front() + s / static_cast<double>(x.size());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, const std::string& where) {
  double x = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) throw DataFormatError(where + ": not a number: '" + field + "'");
  return x;
}

/// Two-column CSV with the given header; '#' lines are comments.
std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::filesystem::path& p,
                                                                     const std::string& second) {
  const std::string text = read_file(p);
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  std::vector<double> a, b;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw DataFormatError(p.string() + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
    }
    const std::string c0 = trim(std::string_view(t).substr(0, comma));
    const std::string c1 = trim(std::string_view(t).substr(comma + 1));
    if (!header) {
      if (c0 != "T" || c1 != second) {
        throw DataFormatError(p.string() + ": header must be 'T," + second + "'");
      }
      header = true;
      continue;
    }
    const std::string where = p.string() + ":" + std::to_string(lineno);
    a.push_back(parse_number(c0, where));
    b.push_back(parse_number(c1, where));
  }
  if (!header) throw DataFormatError(p.string() + ": missing header");
  return {std::move(a), std::move(b)};
}

void write_two_columns(std::ostream& os, const std::string& second, const std::vector<double>& a,
                       const std::vector<double>& b) {
  os << "T," << second << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < a.size(); ++i) os << a[i] << ',' << b[i] << '\n';
}

std::string file_stem(const GasDataset& d) {
  std::ostringstream ss;
  ss << d.gas << '_' << std::setprecision(6) << d.pressure_bar << "bar";
  return ss.str();
}

bool same_pressure(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

const Table1Entry* find_reference(const std::string& gas, double pressure) {
  for (const auto& e : table1()) {
    if (e.gas == gas && same_pressure(e.pressure_bar, pressure)) return &e;
  }
  return nullptr;
}

Table1Fit fit_entry(const GasDataset& d, const Table1Entry& ref) {
  Table1Fit f;
  f.reference = ref;
  const auto cv = restrict(d.cv, ref.T_min, ref.T_max);
  const auto mu = restrict(d.viscosity, ref.T_min, ref.T_max);
  if (cv.size() < 2 || mu.size() < 2) {
    throw DataFormatError(d.gas + " at " + std::to_string(d.pressure_bar) + " bar: fewer than two rows in the reference interval");
  }
  if (d.cv.T.front() > ref.T_min || d.cv.T.back() < ref.T_max || d.viscosity.T.front() > ref.T_min ||
      d.viscosity.T.back() < ref.T_max) {
    f.notes.push_back("data do not cover the full reference interval");
  }
  f.delta = fit_delta(cv);
  f.zeta = fit_zeta(mu);
  return f;
}

}  // namespace

void CvSeries::check() const { check_increasing(T, c_hat_v, "c_v series"); }
void ViscositySeries::check() const { check_increasing(T, mu, "viscosity series"); }

FitResult fit_delta(const CvSeries& s) {
  if (s.size() == 0) throw DataFormatError("fit_delta: empty series");
  s.check();
  FitResult r;
  const double mean = shifted_mean(s.c_hat_v);
  r.value = 2.0 * mean - 3.0;
  const double c0 = s.c_hat_v.front();
  double ss = 0.0;
  for (double c : s.c_hat_v) {
    r.max_relative_change = std::max(r.max_relative_change, std::abs(c - c0) / c0);
    ss += (c - mean) * (c - mean);
  }
  const auto n = static_cast<double>(s.size());
  r.residual = std::sqrt(ss / n);
  r.half_width = s.size() > 1 ? 2.0 * 2.0 * std::sqrt(ss / (n - 1.0) / n) : 0.0;
  r.polytropic = r.max_relative_change <= kPolytropicTolerance;
  if (s.size() < 2) r.warnings.push_back("single row; no spread estimate");
  if (std::abs(r.value) <= 1e-12) {
    r.warnings.push_back("at the monatomic boundary delta = 0");
  } else if (r.value < 0.0) {
    r.warnings.push_back("below the monatomic value c_v = 3/2");
  }
  if (!r.polytropic) r.warnings.push_back("c_v varies by more than 5%; not polytropic over this interval");
  return r;
}

FitResult fit_zeta(const ViscositySeries& s) {
  if (s.size() == 0) throw DataFormatError("fit_zeta: empty series");
  s.check();
  if (s.size() < 2) throw DataFormatError("fit_zeta: at least two rows required");
  const std::size_t n = s.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(s.T[i]);
    y[i] = std::log(s.mu[i]);
  }
  const double xm = shifted_mean(x), ym = shifted_mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw DataFormatError("fit_zeta: degenerate series (all temperatures equal)");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - ym - slope * (x[i] - xm);
    rss += e * e;
  }
  FitResult r;
  r.value = zeta_from_viscosity_exponent(slope);
  r.residual = std::sqrt(rss / static_cast<double>(n));
  if (n > 2) {
    const double se_slope = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    r.half_width = 2.0 * 2.0 * se_slope;
  } else {
    r.warnings.push_back("two rows; no residual degrees of freedom for a confidence interval");
  }
  if (!(slope > 0.0)) r.warnings.push_back("nonpositive viscosity exponent");
  return r;
}

CvSeries restrict(const CvSeries& s, double T_min, double T_max) {
  CvSeries out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.T[i] >= T_min && s.T[i] <= T_max) {
      out.T.push_back(s.T[i]);
      out.c_hat_v.push_back(s.c_hat_v[i]);
    }
  }
  return out;
}

ViscositySeries restrict(const ViscositySeries& s, double T_min, double T_max) {
  ViscositySeries out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.T[i] >= T_min && s.T[i] <= T_max) {
      out.T.push_back(s.T[i]);
      out.mu.push_back(s.mu[i]);
    }
  }
  return out;
}

std::vector<GasDataset> synthetic_table1_dataset() {
  // viscosity at 300 K in Pa s; only the slope matters for the fit
  const std::map<std::string, double> mu300{{"N2", 1.78e-5}, {"O2", 2.07e-5}, {"CO", 1.77e-5}, {"H2", 0.89e-5}};
  std::vector<GasDataset> out;
  for (const auto& e : table1()) {
    GasDataset d;
    d.gas = e.gas;
    d.pressure_bar = e.pressure_bar;
    const double s = viscosity_exponent(e.zeta);
    for (double T = e.T_min; T <= e.T_max + 1e-9; T += 10.0) {
      d.cv.T.push_back(T);
      d.cv.c_hat_v.push_back(0.5 * (e.delta + 3.0));
      d.viscosity.T.push_back(T);
      d.viscosity.mu.push_back(mu300.at(e.gas) * std::pow(T / e.T_min, s));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Table1Fit> reproduce_table1(const std::vector<GasDataset>& data) {
  std::vector<Table1Fit> out;
  for (const auto& ref : table1()) {
    const auto it = std::find_if(data.begin(), data.end(), [&](const GasDataset& d) {
      return d.gas == ref.gas && same_pressure(d.pressure_bar, ref.pressure_bar);
    });
    if (it == data.end()) {
      std::ostringstream msg;
      msg << "no data for " << ref.gas << " at " << ref.pressure_bar << " bar";
      throw MissingEntry(msg.str());
    }
    out.push_back(fit_entry(*it, ref));
  }
  return out;
}

std::vector<Table1Fit> fit_datasets(const std::vector<GasDataset>& data) {
  std::vector<Table1Fit> out;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& d : data) {
    if (const auto* ref = find_reference(d.gas, d.pressure_bar)) {
      out.push_back(fit_entry(d, *ref));
      continue;
    }
    Table1Fit f;
    f.reference = {d.gas, d.cv.T.empty() ? nan : d.cv.T.front(), d.cv.T.empty() ? nan : d.cv.T.back(), d.pressure_bar,
                   nan, nan, nan};
    f.delta = fit_delta(d.cv);
    f.zeta = fit_zeta(d.viscosity);
    f.notes.push_back("no reference row");
    out.push_back(std::move(f));
  }
  return out;
}

CvSeries read_cv_csv(const std::filesystem::path& p) {
  auto [T, c] = read_two_columns(p, "c_hat_v");
  CvSeries s{std::move(T), std::move(c)};
  s.check();
  return s;
}

ViscositySeries read_viscosity_csv(const std::filesystem::path& p) {
  auto [T, mu] = read_two_columns(p, "mu");
  ViscositySeries s{std::move(T), std::move(mu)};
  s.check();
  return s;
}

void write_cv_csv(std::ostream& os, const CvSeries& s) { write_two_columns(os, "c_hat_v", s.T, s.c_hat_v); }
void write_viscosity_csv(std::ostream& os, const ViscositySeries& s) { write_two_columns(os, "mu", s.T, s.mu); }

std::vector<GasDataset> read_manifest(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataFormatError(p.string() + ": " + e.what());
  }
  const auto base = p.parent_path();
  std::vector<GasDataset> out;
  try {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
      throw DataFormatError(p.string() + ": expected an object with an 'entries' array");
    }
    for (const auto& e : j["entries"]) {
      GasDataset d;
      d.gas = e.at("gas").get<std::string>();
      d.pressure_bar = e.at("pressure_bar").get<double>();
      if (!(d.pressure_bar > 0.0)) throw DataFormatError(p.string() + ": pressure_bar must be positive");
      if (e.contains("units")) {
        const auto& u = e["units"];
        if (u.contains("T") && u["T"].get<std::string>() != "K") {
          throw DataFormatError(p.string() + ": temperatures must be in K");
        }
      }
      d.cv = read_cv_csv(base / e.at("cv_file").get<std::string>());
      d.viscosity = read_viscosity_csv(base / e.at("viscosity_file").get<std::string>());
      out.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(p.string() + ": " + e.what());
  }
  return out;
}

void write_dataset(const std::filesystem::path& dir, const std::vector<GasDataset>& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& d : data) {
    const std::string stem = file_stem(d);
    std::ostringstream cv, mu;
    write_cv_csv(cv, d.cv);
    write_viscosity_csv(mu, d.viscosity);
    write_file_atomic(dir / (stem + "_cv.csv"), cv.str());
    write_file_atomic(dir / (stem + "_viscosity.csv"), mu.str());
    entries.push_back({{"gas", d.gas},
                       {"pressure_bar", d.pressure_bar},
                       {"cv_file", stem + "_cv.csv"},
                       {"viscosity_file", stem + "_viscosity.csv"},
                       {"units", {{"T", "K"}, {"mu", "Pa s"}}}});
  }
  nlohmann::ordered_json m;
  m["entries"] = entries;
  write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

void write_report_csv(std::ostream& os, const std::vector<Table1Fit>& rows) {
  os << "species,T_min,T_max,pressure_bar,delta_fit,delta_half_width,zeta_fit,zeta_half_width,delta_ref,zeta_ref,"
        "zeta_chapman_cowling,delta_discrepancy,zeta_discrepancy,zeta_cc_discrepancy,polytropic\n";
  os << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.reference.gas << ',' << r.reference.T_min << ',' << r.reference.T_max << ',' << r.reference.pressure_bar
       << ',' << r.delta.value << ',' << r.delta.half_width << ',' << r.zeta.value << ',' << r.zeta.half_width << ','
       << r.reference.delta << ',' << r.reference.zeta << ',' << r.reference.zeta_chapman_cowling << ','
       << r.delta_discrepancy() << ',' << r.zeta_discrepancy() << ',' << r.zeta_cc_discrepancy() << ','
       << (r.delta.polytropic ? "true" : "false") << '\n';
  }
}

}  // namespace polykin
