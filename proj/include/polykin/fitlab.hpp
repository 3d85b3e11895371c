#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "polykin/fileio.hpp"
#include "polykin/hypotheses.hpp"

namespace polykin {

/// Malformed data or manifest.
class DataFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensionless specific heat c_v / k_B per molecule over temperature.
struct CvSeries {
  std::vector<double> T;
  std::vector<double> c_hat_v;

  /// Throws DataFormatError unless T is strictly increasing and c_hat_v > 0.
  void check() const;
  [[nodiscard]] std::size_t size() const { return T.size(); }
};

struct ViscositySeries {
  std::vector<double> T;
  std::vector<double> mu;

  void check() const;
  [[nodiscard]] std::size_t size() const { return T.size(); }
  /// Reference point (T_0, mu(T_0)), the first row.
  [[nodiscard]] std::pair<double, double> reference() const { return {T.at(0), mu.at(0)}; }
};

struct FitResult {
  double value = 0.0;
  double half_width = 0.0;  // two standard errors
  bool polytropic = true;   // fit_delta only
  double max_relative_change = 0.0;
  double residual = 0.0;  // rms residual of the fit
  std::vector<std::string> warnings;
};

inline constexpr double kPolytropicTolerance = 0.05;

/// delta = 2 mean(c_hat_v) - 3. Polytropic iff c_hat_v changes by at most 5%
/// relative to its value at the lowest temperature.
[[nodiscard]] FitResult fit_delta(const CvSeries& s);

/// zeta = 2 (1 - s) with s the least-squares slope of log mu against log T.
[[nodiscard]] FitResult fit_zeta(const ViscositySeries& s);

/// Restriction to T_min <= T <= T_max.
[[nodiscard]] CvSeries restrict(const CvSeries& s, double T_min, double T_max);
[[nodiscard]] ViscositySeries restrict(const ViscositySeries& s, double T_min, double T_max);

struct GasDataset {
  std::string gas;
  double pressure_bar = 0.0;
  CvSeries cv;
  ViscositySeries viscosity;
};

/// Exact c_v = (delta + 3) / 2 and mu = mu0 (T / T0)^{1 - zeta/2} from the
/// reference parameters, every 10 K over each gas' interval.
[[nodiscard]] std::vector<GasDataset> synthetic_table1_dataset();

/// Viscosity exponent for a given zeta, and back.
[[nodiscard]] inline double viscosity_exponent(double zeta) { return 1.0 - 0.5 * zeta; }
[[nodiscard]] inline double zeta_from_viscosity_exponent(double s) { return 2.0 * (1.0 - s); }

struct Table1Fit {
  Table1Entry reference;
  FitResult delta;
  FitResult zeta;
  std::vector<std::string> notes;

  [[nodiscard]] double delta_discrepancy() const { return delta.value - reference.delta; }
  [[nodiscard]] double zeta_discrepancy() const { return zeta.value - reference.zeta; }
  [[nodiscard]] double zeta_cc_discrepancy() const { return zeta.value - reference.zeta_chapman_cowling; }
};

/// Missing gas or pressure in a dataset.
class MissingEntry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fits every reference row from the matching dataset entry over the
/// reference temperature interval.
[[nodiscard]] std::vector<Table1Fit> reproduce_table1(const std::vector<GasDataset>& data);

/// Fits every dataset entry; reference columns are filled when the gas and
/// pressure match a reference row, else left NaN.
[[nodiscard]] std::vector<Table1Fit> fit_datasets(const std::vector<GasDataset>& data);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

[[nodiscard]] CvSeries read_cv_csv(const std::filesystem::path& p);
[[nodiscard]] ViscositySeries read_viscosity_csv(const std::filesystem::path& p);
void write_cv_csv(std::ostream& os, const CvSeries& s);
void write_viscosity_csv(std::ostream& os, const ViscositySeries& s);

/// {"entries":[{"gas","pressure_bar","cv_file","viscosity_file","units":{"T":"K"}}]}
/// with file paths relative to the manifest.
[[nodiscard]] std::vector<GasDataset> read_manifest(const std::filesystem::path& p);

/// Writes CSVs and manifest.json into dir.
void write_dataset(const std::filesystem::path& dir, const std::vector<GasDataset>& data);

void write_report_csv(std::ostream& os, const std::vector<Table1Fit>& rows);

}  // namespace polykin
