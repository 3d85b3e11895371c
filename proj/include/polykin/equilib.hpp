#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "polykin/collide.hpp"
#include "polykin/model.hpp"
#include "polykin/vec3.hpp"

namespace polykin {

struct SingleTemperature {
  double T = 1.0;
};
struct TwoTemperature {
  double T_kin = 1.0;
  double T_int = 1.0;
};
using Temperatures = std::variant<SingleTemperature, TwoTemperature>;

struct EquilibriumParams {
  std::vector<double> n{1.0};  // one density per species
  Vec3 u;
  Temperatures temperatures = SingleTemperature{};

  [[nodiscard]] double T_kin() const;
  [[nodiscard]] double T_int() const;

  static EquilibriumParams single(double n, Vec3 u, double T);
  static EquilibriumParams two_temperature(double n, Vec3 u, double T_kin, double T_int);
};

/// Model family a distribution or collision process belongs to.
enum class Family { Monatomic, BorgnakkeLarsen, Resonant, Discrete, MixtureBL, MixtureDiscrete };

[[nodiscard]] std::string_view family_name(Family f);

/// Infer the family from the species table; `resonant` selects the resonant
/// process for a single continuous species.
[[nodiscard]] Family family_of(const MixtureSpec& spec, bool resonant = false);

/// Evaluable (two-temperature) Maxwellian over states of a spec. Equal kinetic
/// and internal temperatures give the equilibria of every family; distinct
/// temperatures are an equilibrium only for the resonant process.
class Maxwellian {
 public:
  Maxwellian(MixtureSpec spec, EquilibriumParams params, Family family);

  [[nodiscard]] double operator()(const ParticleState& w) const;
  /// log M(w); -inf where M vanishes.
  [[nodiscard]] double log_density(const ParticleState& w) const;

  [[nodiscard]] const MixtureSpec& spec() const { return spec_; }
  [[nodiscard]] const EquilibriumParams& params() const { return params_; }
  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double kT_kin() const { return spec_.units.k_B * params_.T_kin(); }
  [[nodiscard]] double kT_int() const { return spec_.units.k_B * params_.T_int(); }

 private:
  MixtureSpec spec_;
  EquilibriumParams params_;
  Family family_;
  std::vector<double> log_norm_;  // per species: log n_i + 3/2 log(m/2 pi kT) - log q
};

/// Throws std::invalid_argument on family/state mismatch.
[[nodiscard]] double maxwellian_eval(const Maxwellian& M, const ParticleState& w);

/// q(T): Gamma(delta/2)(k_B T)^{delta/2} for the power law, sum phi e^{-I/kT} for levels, 1 otherwise.
[[nodiscard]] double partition_function(const EnergyModel& energy, double T, const UnitSystem& units = {});

/// Psi_res(Z) = int_0^Z phi(I') phi(Z - I') dI' = Z^{delta-1} Gamma(delta/2)^2 / Gamma(delta).
[[nodiscard]] double psi_res(double Z, double delta);

struct DetailedBalance {
  double residual = 0.0;  // M' M'_* Phi - M M_*
  double relative = 0.0;  // |residual| / max(M' M'_* Phi, M M_*)
};

/// Throws std::invalid_argument for an inadmissible outcome.
[[nodiscard]] DetailedBalance detailed_balance_residual(const Maxwellian& M, const StatePair& pre,
                                                        const CollisionOutcome& outcome);

struct EquilibriumMoments {
  double n = 0.0;
  Vec3 u;
  double T = 0.0;                  // from the velocity variance
  double velocity_variance = 0.0;  // per component, k_B T / m
  double mean_internal = 0.0;      // <I>
};

[[nodiscard]] EquilibriumMoments equilibrium_moments(const EquilibriumParams& params, const Species& species,
                                                     const UnitSystem& units = {}, std::size_t species_index = 0);

/// <I> at temperature T for one energy model.
[[nodiscard]] double mean_internal_energy(const EnergyModel& energy, double T, const UnitSystem& units = {});

/// Internal-energy truncation k_B T (delta/2 + 40); the Gamma tail beyond is < 1e-16.
[[nodiscard]] double internal_energy_cutoff(double delta, double kT);

}  // namespace polykin
