#include "polykin/equilib.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace polykin {

double EquilibriumParams::T_kin() const {
  return std::visit(
      [](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, SingleTemperature>) {
          return t.T;
        } else {
          return t.T_kin;
        }
      },
      temperatures);
}

double EquilibriumParams::T_int() const {
  return std::visit(
      [](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, SingleTemperature>) {
          return t.T;
        } else {
          return t.T_int;
        }
      },
      temperatures);
}

EquilibriumParams EquilibriumParams::single(double n, Vec3 u, double T) {
  return {{n}, u, SingleTemperature{T}};
}

EquilibriumParams EquilibriumParams::two_temperature(double n, Vec3 u, double T_kin, double T_int) {
  return {{n}, u, TwoTemperature{T_kin, T_int}};
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Monatomic: return "monatomic";
    case Family::BorgnakkeLarsen: return "borgnakke_larsen";
    case Family::Resonant: return "resonant";
    case Family::Discrete: return "discrete";
    case Family::MixtureBL: return "mixture_bl";
    case Family::MixtureDiscrete: return "mixture_discrete";
  }
  return "unknown";
}

Family family_of(const MixtureSpec& spec, bool resonant) {
  if (spec.species.empty()) throw std::invalid_argument("family_of: empty species table");
  bool any_cont = false, any_disc = false;
  for (const auto& s : spec.species) {
    any_cont = any_cont || is_continuous(s.energy);
    any_disc = any_disc || is_discrete(s.energy);
  }
  if (any_cont && any_disc) {
    throw std::invalid_argument("family_of: continuous and discrete internal energies cannot be mixed");
  }
  if (spec.size() == 1) {
    if (any_cont) return resonant ? Family::Resonant : Family::BorgnakkeLarsen;
    if (any_disc) return Family::Discrete;
    return Family::Monatomic;
  }
  if (resonant) throw std::invalid_argument("family_of: the resonant process is single-species");
  return any_disc ? Family::MixtureDiscrete : Family::MixtureBL;
}

// ---------------------------------------------------------------------------

double partition_function(const EnergyModel& energy, double T, const UnitSystem& units) {
  if (!(T > 0.0)) throw std::domain_error("partition_function: T must be positive");
  const double kT = units.k_B * T;
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&energy)) {
    return std::tgamma(0.5 * c->delta) * std::pow(kT, 0.5 * c->delta);
  }
  if (const auto* d = std::get_if<DiscreteLevels>(&energy)) {
    double q = 0.0;
    for (const auto& lv : d->levels) q += lv.degeneracy * std::exp(-lv.energy / kT);
    return q;
  }
  return 1.0;
}

namespace {

double log_partition_function(const EnergyModel& energy, double kT) {
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&energy)) {
    return std::lgamma(0.5 * c->delta) + 0.5 * c->delta * std::log(kT);
  }
  if (const auto* d = std::get_if<DiscreteLevels>(&energy)) {
    // shift by the ground level to keep the sum representable
    const double e0 = d->levels.front().energy;
    double q = 0.0;
    for (const auto& lv : d->levels) q += lv.degeneracy * std::exp(-(lv.energy - e0) / kT);
    return std::log(q) - e0 / kT;
  }
  return 0.0;
}

bool state_matches_family(const MixtureSpec& spec, const ParticleState& w, Family f) {
  const auto& e = spec.species.at(w.species).energy;
  switch (f) {
    case Family::Monatomic: return std::holds_alternative<Monatomic>(e);
    case Family::BorgnakkeLarsen:
    case Family::Resonant: return is_continuous(e);
    case Family::Discrete: return is_discrete(e);
    case Family::MixtureBL: return !is_discrete(e);
    case Family::MixtureDiscrete: return !is_continuous(e);
  }
  return false;
}

}  // namespace

Maxwellian::Maxwellian(MixtureSpec spec, EquilibriumParams params, Family family)
    : spec_(std::move(spec)), params_(std::move(params)), family_(family) {
  if (params_.n.size() != spec_.size()) {
    throw std::invalid_argument("Maxwellian: need one number density per species");
  }
  if (!(params_.T_kin() > 0.0 && params_.T_int() > 0.0)) {
    throw std::invalid_argument("Maxwellian: temperatures must be positive");
  }
  const double kTk = kT_kin(), kTi = kT_int();
  log_norm_.resize(spec_.size());
  for (std::size_t i = 0; i < spec_.size(); ++i) {
    if (!(params_.n[i] >= 0.0)) throw std::invalid_argument("Maxwellian: negative number density");
    const double m = spec_.mass(i);
    log_norm_[i] = std::log(params_.n[i]) + 1.5 * std::log(m / (2.0 * std::numbers::pi * kTk)) -
                   log_partition_function(spec_.species[i].energy, kTi);
  }
}

double Maxwellian::log_density(const ParticleState& w) const {
  const std::size_t i = w.species;
  if (params_.n.at(i) == 0.0) return -std::numeric_limits<double>::infinity();
  const double m = spec_.mass(i);
  double lg = log_norm_[i] - 0.5 * m * (w.v - params_.u).norm2() / kT_kin();
  const auto& e = spec_.species[i].energy;
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) {
    const double I = std::get<ContinuousEnergy>(w.internal).I;
    const double p = 0.5 * c->delta - 1.0;
    if (p != 0.0) {
      if (I == 0.0) return p > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      lg += p * std::log(I);
    }
    lg -= I / kT_int();
  } else if (is_discrete(e)) {
    lg += std::log(state_weight(spec_, w)) - internal_energy(spec_, w) / kT_int();
  }
  return lg;
}

double Maxwellian::operator()(const ParticleState& w) const { return std::exp(log_density(w)); }

double maxwellian_eval(const Maxwellian& M, const ParticleState& w) {
  check_state(M.spec(), w);
  if (!state_matches_family(M.spec(), w, M.family())) {
    throw std::invalid_argument("maxwellian_eval: state does not belong to the Maxwellian's family");
  }
  return M(w);
}

double psi_res(double Z, double delta) {
  if (!(Z >= 0.0)) throw std::domain_error("psi_res: Z must be nonnegative");
  if (!(delta > 0.0)) throw std::domain_error("psi_res: delta must be positive");
  const double c = std::exp(2.0 * std::lgamma(0.5 * delta) - std::lgamma(delta));
  if (Z == 0.0) {
    if (delta > 1.0) return 0.0;
    if (delta == 1.0) return c;
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(Z, delta - 1.0) * c;
}

DetailedBalance detailed_balance_residual(const Maxwellian& M, const StatePair& pre, const CollisionOutcome& outcome) {
  if (!outcome.admissible) throw std::invalid_argument("detailed_balance_residual: inadmissible collision");
  const auto& spec = M.spec();
  const double log_b = M.log_density(pre[0]) + M.log_density(pre[1]);
  const double log_a = M.log_density(outcome.post[0]) + M.log_density(outcome.post[1]) +
                       std::log(phi_ratio(spec, pre, outcome.post));
  DetailedBalance out;
  const double a = std::exp(log_a), b = std::exp(log_b);
  out.residual = a - b;
  const double scale = std::max(a, b);
  out.relative = scale > 0.0 ? std::abs(out.residual) / scale : 0.0;
  return out;
}

double mean_internal_energy(const EnergyModel& energy, double T, const UnitSystem& units) {
  const double kT = units.k_B * T;
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&energy)) return 0.5 * c->delta * kT;
  if (const auto* d = std::get_if<DiscreteLevels>(&energy)) {
    const double e0 = d->levels.front().energy;
    double num = 0.0, q = 0.0;
    for (const auto& lv : d->levels) {
      const double w = lv.degeneracy * std::exp(-(lv.energy - e0) / kT);
      num += w * lv.energy;
      q += w;
    }
    return num / q;
  }
  return 0.0;
}

EquilibriumMoments equilibrium_moments(const EquilibriumParams& params, const Species& species,
                                       const UnitSystem& units, std::size_t species_index) {
  EquilibriumMoments m;
  m.n = params.n.at(species_index);
  m.u = params.u;
  m.T = params.T_kin();
  m.velocity_variance = units.k_B * params.T_kin() / species.mass;
  m.mean_internal = mean_internal_energy(species.energy, params.T_int(), units);
  return m;
}

double internal_energy_cutoff(double delta, double kT) { return kT * (0.5 * delta + 40.0); }

}  // namespace polykin
