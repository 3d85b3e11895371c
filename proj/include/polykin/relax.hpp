#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polykin/collide.hpp"
#include "polykin/mc.hpp"
#include "polykin/model.hpp"

namespace polykin {

/// Raised when the kernel majorant is exceeded more often than configured.
class MajorantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RelaxConfig {
  double dt = 0.01;
  std::uint64_t seed = 1;
  std::size_t sample_every = 10;  // steps between time-series rows
  double number_density = 1.0;    // volume = N / number_density
  /// Kernel majorant per pair type (i <= j, row-major upper triangle); empty
  /// selects it from the initial pair-energy distribution.
  std::vector<double> B_maj;
  double majorant_quantile = 1.0 - 1e-6;
  double majorant_safety = 2.0;
  std::size_t majorant_probe_pairs = 1000000;
  /// Fraction of accepted-candidate tests allowed to exceed the majorant.
  double violation_tolerance = 1e-4;
};

struct Ensemble {
  MixtureSpec spec;
  std::vector<ParticleState> particles;
  double time = 0.0;
  std::uint64_t collisions = 0;
  Rng rng;

  // statistics of the pair-selection scheme
  std::uint64_t candidates = 0;
  std::uint64_t majorant_violations = 0;
  double max_acceptance = 0.0;
  double max_relative_defect = 0.0;
  std::vector<double> B_maj;  // per pair type, see RelaxConfig

  [[nodiscard]] std::size_t size() const { return particles.size(); }
};

/// Equal shares per species unless `composition` gives relative weights.
[[nodiscard]] Ensemble init_ensemble(const MixtureSpec& spec, std::size_t N, double T_kin0, double T_int0,
                                     const Vec3& u0, std::uint64_t seed,
                                     const std::vector<double>& composition = {});

/// Advance by config.dt.
void step(Ensemble& ens, const RelaxConfig& cfg);

/// Selects per-pair-type majorants from the current ensemble unless given in cfg.
void prepare_majorants(Ensemble& ens, const RelaxConfig& cfg);

struct Moments {
  Vec3 u;
  double T_kin = 0.0;
  double T_int = 0.0;   // NaN without internal degrees of freedom
  double mean_I = 0.0;  // over polyatomic particles
  double total_energy = 0.0;
  Vec3 momentum;
};

[[nodiscard]] Moments ensemble_moments(const Ensemble& ens);

/// H functional from a histogram density estimate (speed x internal energy).
/// Bin ranges scale with T_ref and the internal-energy bin count grows with
/// T_ref / T_low; keep both fixed along a run so values compare.
/// T_ref <= 0 takes the largest of T_eq and the current temperatures.
[[nodiscard]] double h_estimate(const Ensemble& ens, double T_ref = 0.0, double T_low = 0.0);

/// Temperature at which the total energy per particle in the
/// center-of-momentum frame equals (3/2) k T + <I>(T).
[[nodiscard]] double equilibrium_temperature(const Ensemble& ens);

struct TimeSeriesRow {
  double t = 0.0;
  double T_kin = 0.0;
  double T_int = 0.0;
  double mean_I = 0.0;
  double H = 0.0;
  std::uint64_t collisions = 0;
};

struct TimeSeries {
  std::vector<TimeSeriesRow> rows;
  std::uint64_t seed = 0;
};

struct RelaxSummary {
  double T_eq = 0.0;
  double T_kin = 0.0;
  double T_int = 0.0;
  double equipartition_gap = 0.0;  // |T_kin - T_int| / T_eq
  double mean_I_ratio = 0.0;       // final <I> / <I>_eq(T_eq)
  double energy_drift = 0.0;       // relative
  double momentum_drift = 0.0;     // relative to sqrt(M E)
  double collision_rate = 0.0;     // collisions per particle per unit time
  std::uint64_t collisions = 0;
  std::uint64_t candidates = 0;
  std::uint64_t majorant_violations = 0;
  double max_relative_defect = 0.0;
  bool h_nonincreasing = false;
  bool equipartition_ok = false;
  bool mean_I_ok = false;
  bool energy_ok = false;
};

struct RelaxResult {
  TimeSeries series;
  RelaxSummary summary;
};

inline constexpr double kEquipartitionTolerance = 0.02;
inline constexpr double kEnergyDriftTolerance = 1e-10;

[[nodiscard]] RelaxResult run(const MixtureSpec& spec, const RelaxConfig& cfg, std::size_t N, double T_kin0,
                              double T_int0, double t_end, const std::vector<double>& composition = {});

/// Continues an initialized ensemble up to t_end.
[[nodiscard]] RelaxResult run(Ensemble& ens, const RelaxConfig& cfg, double t_end);

/// Noise level of a series: sd about a linear fit over its second half.
[[nodiscard]] double trend_noise(const std::vector<double>& values);

/// Least-squares nonincreasing fit (pool-adjacent-violators).
[[nodiscard]] std::vector<double> nonincreasing_fit(const std::vector<double>& values);

/// Nonincreasing within noise: every value lies within 3 trend_noise of the
/// nonincreasing fit.
[[nodiscard]] bool trend_nonincreasing(const std::vector<double>& values);

void write_time_series_csv(std::ostream& os, const TimeSeries& ts);

}  // namespace polykin
