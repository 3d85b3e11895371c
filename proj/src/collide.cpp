#include "polykin/collide.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polykin {

namespace {

bool has_continuous(const ParticleState& w) { return std::holds_alternative<ContinuousEnergy>(w.internal); }

double continuous_I(const ParticleState& w) { return std::get<ContinuousEnergy>(w.internal).I; }

Vec3 center_velocity(double mi, double mj, const Vec3& v, const Vec3& vs) {
  return (mi * v + mj * vs) / (mi + mj);
}

/// Post velocities for a relative speed g' along sigma, mixture form.
std::array<Vec3, 2> split_velocities(double mi, double mj, const Vec3& c, double g, const Vec3& sigma) {
  const double M = mi + mj;
  return {c + (mj / M * g) * sigma, c - (mi / M * g) * sigma};
}

double level_energy(const DiscreteLevels& d, std::size_t k) {
  if (k >= d.levels.size()) throw std::out_of_range("level index out of range");
  return d.levels[k].energy;
}

double lab_energy(const MixtureSpec& spec, const ParticleState& w) {
  return 0.5 * spec.mass(w.species) * w.v.norm2() + internal_energy(spec, w);
}

}  // namespace

void check_state(const MixtureSpec& spec, const ParticleState& w) {
  if (w.species >= spec.size()) throw std::invalid_argument("state: species index out of range");
  const auto& e = spec.species[w.species].energy;
  if (std::holds_alternative<Monatomic>(e)) {
    const auto* lv = std::get_if<LevelIndex>(&w.internal);
    if (!(std::holds_alternative<NoInternal>(w.internal) || (lv && lv->k == 0))) {
      throw std::invalid_argument("state: monatomic species carries internal energy");
    }
  } else if (is_continuous(e)) {
    const auto* c = std::get_if<ContinuousEnergy>(&w.internal);
    if (!c) throw std::invalid_argument("state: continuous species needs an internal energy I");
    if (!(c->I >= 0.0)) throw std::invalid_argument("state: negative internal energy");
  } else {
    const auto* lv = std::get_if<LevelIndex>(&w.internal);
    if (!lv) throw std::invalid_argument("state: discrete species needs a level index");
    if (lv->k >= std::get<DiscreteLevels>(e).levels.size()) {
      throw std::invalid_argument("state: level index out of range");
    }
  }
}

double internal_energy(const MixtureSpec& spec, const ParticleState& w) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoInternal>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ContinuousEnergy>) {
          return s.I;
        } else {
          const auto& e = spec.species.at(w.species).energy;
          if (std::holds_alternative<Monatomic>(e)) return 0.0;
          return level_energy(std::get<DiscreteLevels>(e), s.k);
        }
      },
      w.internal);
}

double state_weight(const MixtureSpec& spec, const ParticleState& w) {
  const auto& e = spec.species.at(w.species).energy;
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) return phi_weight(continuous_I(w), c->delta);
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) {
    return d->levels.at(std::get<LevelIndex>(w.internal).k).degeneracy;
  }
  return 1.0;
}

Direction::Direction(const Vec3& s) {
  const double n = s.norm();
  if (!(std::abs(n - 1.0) <= tolerance)) {
    throw std::invalid_argument("collision direction sigma must be a unit vector");
  }
  s_ = s / n;
}

double total_energy(const MixtureSpec& spec, const StatePair& pair) {
  const double mi = spec.mass(pair[0].species), mj = spec.mass(pair[1].species);
  const Vec3 V = pair[0].v - pair[1].v;
  return 0.5 * reduced_mass(mi, mj) * V.norm2() + internal_energy(spec, pair[0]) +
         internal_energy(spec, pair[1]);
}

std::array<Vec3, 2> collide_monatomic(const Vec3& v, const Vec3& v_star, const Vec3& sigma) {
  const Vec3 s = Direction(sigma).value();
  const Vec3 c = 0.5 * (v + v_star);
  const double g = (v - v_star).norm();
  return {c + (0.5 * g) * s, c - (0.5 * g) * s};
}

CollisionOutcome collide_elastic(const MixtureSpec& spec, const StatePair& pair, const Vec3& sigma) {
  const Vec3 s = Direction(sigma).value();
  const double mi = spec.mass(pair[0].species), mj = spec.mass(pair[1].species);
  const Vec3 c = center_velocity(mi, mj, pair[0].v, pair[1].v);
  const auto [vp, vsp] = split_velocities(mi, mj, c, (pair[0].v - pair[1].v).norm(), s);
  CollisionOutcome out;
  out.post = pair;
  out.post[0].v = vp;
  out.post[1].v = vsp;
  out.E = total_energy(spec, pair);
  return out;
}

CollisionOutcome collide_borgnakke_larsen(const MixtureSpec& spec, const StatePair& pair,
                                          const CollisionParams& params) {
  check_state(spec, pair[0]);
  check_state(spec, pair[1]);
  const bool poly_i = has_continuous(pair[0]);
  const bool poly_j = has_continuous(pair[1]);

  if (!poly_i && !poly_j) {
    const Vec3 sigma = std::visit([](const auto& p) { return p.sigma; }, params);
    return collide_elastic(spec, pair, sigma);
  }

  const double mi = spec.mass(pair[0].species), mj = spec.mass(pair[1].species);
  const double mu = reduced_mass(mi, mj);
  const double E = total_energy(spec, pair);
  const Vec3 c = center_velocity(mi, mj, pair[0].v, pair[1].v);

  CollisionOutcome out;
  out.post = pair;
  out.E = E;

  if (poly_i && poly_j) {
    const auto* p = std::get_if<BLParams>(&params);
    if (!p) throw std::invalid_argument("collide_borgnakke_larsen: poly-poly pair needs (r, R, sigma)");
    if (!(p->r >= 0.0 && p->r <= 1.0 && p->R >= 0.0 && p->R <= 1.0)) {
      throw std::invalid_argument("collide_borgnakke_larsen: r and R must lie in [0,1]");
    }
    const Vec3 s = Direction(p->sigma).value();
    const double g = std::sqrt(2.0 * p->R * E / mu);
    const auto [vp, vsp] = split_velocities(mi, mj, c, g, s);
    out.post[0].v = vp;
    out.post[1].v = vsp;
    out.post[0].internal = ContinuousEnergy{p->r * (1.0 - p->R) * E};
    out.post[1].internal = ContinuousEnergy{(1.0 - p->r) * (1.0 - p->R) * E};
    if (pair[0].species == pair[1].species && p->r < 1.0 && p->R < 1.0) {
      out.jacobian = jacobian_bl(p->r, p->R);
    }
    return out;
  }

  const auto* p = std::get_if<PolyMonoParams>(&params);
  if (!p) throw std::invalid_argument("collide_borgnakke_larsen: poly-mono pair needs (R, sigma)");
  if (!(p->R >= 0.0 && p->R <= 1.0)) throw std::invalid_argument("collide_borgnakke_larsen: R must lie in [0,1]");
  const Vec3 s = Direction(p->sigma).value();
  const double g = std::sqrt(2.0 * p->R * E / mu);
  const auto [vp, vsp] = split_velocities(mi, mj, c, g, s);
  out.post[0].v = vp;
  out.post[1].v = vsp;
  out.post[poly_i ? 0 : 1].internal = ContinuousEnergy{(1.0 - p->R) * E};
  return out;
}

CollisionOutcome collide_resonant(const MixtureSpec& spec, const StatePair& pair, const ResonantParams& params) {
  check_state(spec, pair[0]);
  check_state(spec, pair[1]);
  if (pair[0].species != pair[1].species || !has_continuous(pair[0])) {
    throw std::invalid_argument("collide_resonant: single species with continuous internal energy required");
  }
  const double I = continuous_I(pair[0]), Is = continuous_I(pair[1]);
  const double Z = I + Is;
  if (!(params.I_prime >= 0.0 && params.I_prime <= Z)) {
    throw std::invalid_argument("collide_resonant: I' must lie in [0, I + I_*]");
  }
  const auto [vp, vsp] = collide_monatomic(pair[0].v, pair[1].v, params.sigma);
  CollisionOutcome out;
  out.post = pair;
  out.post[0].v = vp;
  out.post[1].v = vsp;
  out.post[0].internal = ContinuousEnergy{params.I_prime};
  out.post[1].internal = ContinuousEnergy{Z - params.I_prime};
  out.E = total_energy(spec, pair);
  return out;
}

CollisionOutcome collide_discrete(const MixtureSpec& spec, const StatePair& pair, const DiscreteParams& params) {
  check_state(spec, pair[0]);
  check_state(spec, pair[1]);
  const double mi = spec.mass(pair[0].species), mj = spec.mass(pair[1].species);
  const double mu = reduced_mass(mi, mj);

  StatePair target = pair;
  target[0].internal = LevelIndex{params.k_prime};
  target[1].internal = LevelIndex{params.l_prime};
  check_state(spec, target[0]);
  check_state(spec, target[1]);

  const double dI = internal_energy(spec, target[0]) + internal_energy(spec, target[1]) -
                    internal_energy(spec, pair[0]) - internal_energy(spec, pair[1]);
  const Vec3 V = pair[0].v - pair[1].v;
  const double g2 = V.norm2() - 2.0 * dI / mu;

  CollisionOutcome out;
  out.post = pair;
  out.E = total_energy(spec, pair);
  if (g2 < 0.0) {
    out.admissible = false;
    return out;
  }
  const Vec3 s = Direction(params.sigma).value();
  const auto [vp, vsp] = split_velocities(mi, mj, center_velocity(mi, mj, pair[0].v, pair[1].v), std::sqrt(g2), s);
  out.post = target;
  out.post[0].v = vp;
  out.post[1].v = vsp;
  return out;
}

CollisionOutcome collide(const MixtureSpec& spec, const StatePair& pair, const CollisionParams& params) {
  return std::visit(
      [&](const auto& p) -> CollisionOutcome {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ResonantParams>) {
          return collide_resonant(spec, pair, p);
        } else if constexpr (std::is_same_v<T, DiscreteParams>) {
          return collide_discrete(spec, pair, p);
        } else if constexpr (std::is_same_v<T, MonatomicParams>) {
          return collide_elastic(spec, pair, p.sigma);
        } else {
          return collide_borgnakke_larsen(spec, pair, params);
        }
      },
      params);
}

InverseParameters inverse_parameters(const MixtureSpec& spec, const StatePair& pre, const StatePair& post) {
  const double E = total_energy(spec, pre);
  const double E_post = total_energy(spec, post);
  const double mi = spec.mass(pre[0].species), mj = spec.mass(pre[1].species);
  const Vec3 p_pre = mi * pre[0].v + mj * pre[1].v;
  const Vec3 p_post = mi * post[0].v + mj * post[1].v;
  const double pscale = mi * pre[0].v.norm() + mj * pre[1].v.norm() + 1e-300;
  const double escale = std::max(std::abs(E), 1e-300);
  if (std::abs(E - E_post) > 1e-10 * escale || (p_pre - p_post).norm() > 1e-10 * std::max(pscale, escale)) {
    throw std::invalid_argument("inverse_parameters: pairs are not on the same conservation shell");
  }

  InverseParameters out;
  const Vec3 V = pre[0].v - pre[1].v;
  const double g = V.norm();
  out.R = E > 0.0 ? 0.5 * reduced_mass(mi, mj) * V.norm2() / E : 0.0;
  if (g > 0.0) {
    out.sigma = V / g;
  } else {
    out.sigma_defined = false;
  }
  if (has_continuous(pre[0]) && has_continuous(pre[1])) {
    const double I = continuous_I(pre[0]), Is = continuous_I(pre[1]);
    if (I + Is > 0.0) {
      out.r = I / (I + Is);
    } else {
      out.r_defined = false;
    }
  } else {
    out.r_defined = false;
  }
  return out;
}

double InvariantDefect::relative_momentum() const {
  return momentum.norm() / std::max(momentum_scale, 1e-300);
}
double InvariantDefect::relative_energy() const { return std::abs(energy) / std::max(energy_scale, 1e-300); }
double InvariantDefect::relative_kinetic() const { return std::abs(kinetic) / std::max(energy_scale, 1e-300); }
double InvariantDefect::relative_internal() const { return std::abs(internal) / std::max(energy_scale, 1e-300); }

InvariantDefect invariant_defect(const MixtureSpec& spec, const StatePair& pre, const StatePair& post) {
  InvariantDefect d;
  double kin_pre = 0.0, kin_post = 0.0, int_pre = 0.0, int_post = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double m = spec.mass(pre[a].species);
    d.momentum += m * (post[a].v - pre[a].v);
    d.momentum_scale += m * pre[a].v.norm();
    kin_pre += 0.5 * m * pre[a].v.norm2();
    kin_post += 0.5 * spec.mass(post[a].species) * post[a].v.norm2();
    int_pre += internal_energy(spec, pre[a]);
    int_post += internal_energy(spec, post[a]);
  }
  d.kinetic = kin_post - kin_pre;
  d.internal = int_post - int_pre;
  d.energy = (kin_post + int_post) - (kin_pre + int_pre);
  d.energy_scale = lab_energy(spec, pre[0]) + lab_energy(spec, pre[1]);
  // |p| can cancel exactly (v = -v_*); the energy scale keeps the ratio meaningful
  d.momentum_scale = std::max(d.momentum_scale, std::sqrt(2.0 * (spec.mass(pre[0].species) + spec.mass(pre[1].species)) * d.energy_scale));
  return d;
}

double jacobian_bl(double r, double R) {
  if (!(r >= 0.0 && r < 1.0 && R >= 0.0 && R < 1.0)) {
    throw std::domain_error("jacobian_bl: r and R must lie in [0,1)");
  }
  return 8.0 / ((1.0 - r) * (1.0 - R));
}

double phi_ratio(const MixtureSpec& spec, const StatePair& pre, const StatePair& post) {
  double ratio = 1.0;
  for (int a = 0; a < 2; ++a) {
    const auto& e = spec.species.at(pre[a].species).energy;
    if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) {
      const double p = 0.5 * c->delta - 1.0;
      if (p != 0.0) ratio *= std::pow(continuous_I(pre[a]) / continuous_I(post[a]), p);
    } else if (is_discrete(e)) {
      ratio *= state_weight(spec, pre[a]) / state_weight(spec, post[a]);
    }
  }
  return ratio;
}

}  // namespace polykin
