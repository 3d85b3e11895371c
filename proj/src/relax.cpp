#include "polykin/relax.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "polykin/equilib.hpp"

namespace polykin {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::size_t pair_type(std::size_t i, std::size_t j, std::size_t S) {
  if (i > j) std::swap(i, j);
  return i * S - i * (i + 1) / 2 + j;
}

std::size_t pair_type_count(std::size_t S) { return S * (S + 1) / 2; }

/// Compensated sum.
class Summer {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

const PowerLawE& power_kernel(const MixtureSpec& spec, std::size_t i, std::size_t j) {
  const auto* k = std::get_if<PowerLawE>(&spec.kernel(i, j));
  if (!k) throw std::invalid_argument("relaxation supports kernels of the form B = C E^{zeta/2} only");
  return *k;
}

double kernel_value(const PowerLawE& k, double E) {
  return k.zeta == 0.0 ? k.C : k.C * std::pow(E, 0.5 * k.zeta);
}

double level_weight_sum(const EnergyModel& e) {
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) {
    double s = 0.0;
    for (const auto& lv : d->levels) s += lv.degeneracy;
    return s;
  }
  return 1.0;
}

std::size_t level_count(const EnergyModel& e) {
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) return d->levels.size();
  return 1;
}

bool uses_levels(const MixtureSpec& spec) {
  return std::any_of(spec.species.begin(), spec.species.end(), [](const Species& s) { return is_discrete(s.energy); });
}

/// Pair rate = B(E) * rate_constant * residual with residual in [0, 1].
double rate_constant(const MixtureSpec& spec, std::size_t i, std::size_t j) {
  const auto& ei = spec.species[i].energy;
  const auto& ej = spec.species[j].energy;
  if (uses_levels(spec)) {
    const double mu = reduced_mass(spec.mass(i), spec.mass(j));
    return kFourPi * level_weight_sum(ei) * level_weight_sum(ej) * std::sqrt(2.0 / mu);
  }
  const bool pi = is_continuous(ei), pj = is_continuous(ej);
  if (pi && pj) {
    const double di = delta_of(ei), dj = delta_of(ej);
    return kFourPi * std::beta(0.5 * di, 0.5 * dj) * std::beta(1.5, 0.5 * (di + dj));
  }
  if (pi || pj) return kFourPi * std::beta(1.5, 0.5 * delta_of(pi ? ei : ej));
  return kFourPi;
}

constexpr std::uint64_t kMinViolationsForAbort = 10;
constexpr std::size_t kSpeedBins = 64;
constexpr std::size_t kEnergyBins = 32;
constexpr std::size_t kMaxEnergyBins = 256;
constexpr std::size_t kMinPerBin = 10;

struct Channel {
  std::size_t k = 0, l = 0;
  double weight = 0.0;
};

double wsum_of(const std::vector<Channel>& cs) {
  double s = 0.0;
  for (const auto& c : cs) s += c.weight;
  return s;
}

std::vector<std::vector<std::size_t>> species_lists(const Ensemble& ens) {
  std::vector<std::vector<std::size_t>> lists(ens.spec.size());
  for (std::size_t p = 0; p < ens.particles.size(); ++p) lists[ens.particles[p].species].push_back(p);
  return lists;
}

std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

double internal_temperature_from_mean(const std::vector<std::size_t>& counts, const MixtureSpec& spec, double total_I) {
  // solve sum_s N_s <I>_s(T) = total_I by bisection on log T
  double poly = 0.0;
  for (std::size_t s = 0; s < spec.size(); ++s) {
    if (const auto* c = std::get_if<ContinuousPowerLaw>(&spec.species[s].energy)) poly += counts[s] * 0.5 * c->delta;
  }
  if (poly > 0.0 && !uses_levels(spec)) return total_I / (poly * spec.units.k_B);
  auto f = [&](double T) {
    double s = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) s += counts[k] * mean_internal_energy(spec.species[k].energy, T, spec.units);
    return s - total_I;
  };
  double lo = 1e-12, hi = 1.0;
  while (f(hi) < 0.0 && hi < 1e300) hi *= 2.0;
  if (f(hi) < 0.0) return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

bool has_internal_dof(const MixtureSpec& spec) {
  for (const auto& s : spec.species) {
    if (is_continuous(s.energy)) return true;
    if (const auto* d = std::get_if<DiscreteLevels>(&s.energy)) {
      if (d->levels.size() > 1) return true;
    }
  }
  return false;
}

}  // namespace

Ensemble init_ensemble(const MixtureSpec& spec, std::size_t N, double T_kin0, double T_int0, const Vec3& u0,
                       std::uint64_t seed, const std::vector<double>& composition) {
  if (N < 2) throw std::invalid_argument("init_ensemble: at least two particles required");
  if (!(T_kin0 > 0.0 && T_int0 > 0.0)) throw std::invalid_argument("init_ensemble: temperatures must be positive");
  if (auto v = validate(spec); !v.empty()) throw std::invalid_argument("init_ensemble: invalid spec: " + v.front().where + ": " + v.front().what);
  const std::size_t S = spec.size();
  if (S > 2) throw std::invalid_argument("init_ensemble: at most binary mixtures are supported");
  std::vector<double> share = composition.empty() ? std::vector<double>(S, 1.0) : composition;
  if (share.size() != S) throw std::invalid_argument("init_ensemble: composition needs one entry per species");
  double total = 0.0;
  for (double x : share) {
    if (!(x > 0.0)) throw std::invalid_argument("init_ensemble: composition entries must be positive");
    total += x;
  }

  Ensemble ens;
  ens.spec = spec;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x72656c61u};
  ens.rng.seed(seq);
  ens.particles.reserve(N);
  const double kTk = spec.units.k_B * T_kin0, kTi = spec.units.k_B * T_int0;

  std::size_t assigned = 0;
  for (std::size_t s = 0; s < S; ++s) {
    const std::size_t n_s = s + 1 == S ? N - assigned : static_cast<std::size_t>(std::llround(N * share[s] / total));
    assigned += n_s;
    const auto& e = spec.species[s].energy;
    const double sd = std::sqrt(kTk / spec.mass(s));
    std::vector<double> cdf;
    if (const auto* d = std::get_if<DiscreteLevels>(&e)) {
      double acc = 0.0;
      for (const auto& lv : d->levels) {
        acc += lv.degeneracy * std::exp(-(lv.energy - d->levels.front().energy) / kTi);
        cdf.push_back(acc);
      }
    }
    for (std::size_t p = 0; p < n_s; ++p) {
      const Vec3 v = sample_gaussian(ens.rng, u0, sd);
      if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) {
        ens.particles.push_back(ParticleState::continuous(s, v, sample_gamma(ens.rng, 0.5 * c->delta, kTi)));
      } else if (is_discrete(e)) {
        const double x = sample_uniform(ens.rng) * cdf.back();
        const auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
        ens.particles.push_back(ParticleState::level(s, v, std::min(k, cdf.size() - 1)));
      } else if (uses_levels(spec)) {
        ens.particles.push_back(ParticleState::level(s, v, 0));
      } else {
        ens.particles.push_back(ParticleState::mono(s, v));
      }
    }
  }
  return ens;
}

void prepare_majorants(Ensemble& ens, const RelaxConfig& cfg) {
  const auto& spec = ens.spec;
  const std::size_t S = spec.size();
  if (!cfg.B_maj.empty()) {
    if (cfg.B_maj.size() != pair_type_count(S)) throw std::invalid_argument("RelaxConfig: B_maj needs one entry per pair type");
    ens.B_maj = cfg.B_maj;
    return;
  }
  const auto lists = species_lists(ens);
  ens.B_maj.assign(pair_type_count(S), 0.0);
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t j = i; j < S; ++j) {
      const auto& k = power_kernel(spec, i, j);
      const std::size_t t = pair_type(i, j, S);
      if (k.zeta == 0.0) {
        ens.B_maj[t] = k.C;
        continue;
      }
      const auto& li = lists[i];
      const auto& lj = lists[j];
      if (li.empty() || lj.empty() || (i == j && li.size() < 2)) continue;
      std::vector<double> E;
      E.reserve(cfg.majorant_probe_pairs);
      for (std::size_t p = 0; p < cfg.majorant_probe_pairs; ++p) {
        const std::size_t a = li[uniform_index(ens.rng, li.size())];
        std::size_t b;
        do {
          b = lj[uniform_index(ens.rng, lj.size())];
        } while (b == a);
        E.push_back(total_energy(spec, {ens.particles[a], ens.particles[b]}));
      }
      const double q = k.zeta > 0.0 ? cfg.majorant_quantile : 1.0 - cfg.majorant_quantile;
      const auto idx = static_cast<std::size_t>(std::clamp(q * static_cast<double>(E.size() - 1), 0.0,
                                                           static_cast<double>(E.size() - 1)));
      std::nth_element(E.begin(), E.begin() + static_cast<std::ptrdiff_t>(idx), E.end());
      const double Eq = std::max(E[idx], std::numeric_limits<double>::min());
      ens.B_maj[t] = cfg.majorant_safety * kernel_value(k, Eq);
    }
  }
}

void step(Ensemble& ens, const RelaxConfig& cfg) {
  const auto& spec = ens.spec;
  const std::size_t S = spec.size();
  const std::size_t N = ens.size();
  if (N < 2) throw std::invalid_argument("step: at least two particles required");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (ens.B_maj.empty()) prepare_majorants(ens, cfg);

  const double volume = static_cast<double>(N) / cfg.number_density;
  const auto lists = species_lists(ens);
  const bool levels = uses_levels(spec);

  std::vector<Channel> channels;
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t j = i; j < S; ++j) {
      const auto& li = lists[i];
      const auto& lj = lists[j];
      const double pairs = i == j ? 0.5 * static_cast<double>(li.size()) * static_cast<double>(li.size() - (li.empty() ? 0 : 1))
                                  : static_cast<double>(li.size()) * static_cast<double>(lj.size());
      if (pairs <= 0.0) continue;
      const auto& kern = power_kernel(spec, i, j);
      const std::size_t t = pair_type(i, j, S);
      const double B_maj = ens.B_maj[t];
      const double c = rate_constant(spec, i, j);
      const double expected = pairs * c * B_maj * cfg.dt / volume;
      const auto n_cand = static_cast<std::uint64_t>(std::ceil(expected));
      if (n_cand == 0) continue;
      const double scale = expected / static_cast<double>(n_cand);
      const auto& ei = spec.species[i].energy;
      const auto& ej = spec.species[j].energy;
      const double mu = reduced_mass(spec.mass(i), spec.mass(j));

      for (std::uint64_t n = 0; n < n_cand; ++n) {
        const std::size_t a = li[uniform_index(ens.rng, li.size())];
        std::size_t b;
        do {
          b = lj[uniform_index(ens.rng, lj.size())];
        } while (b == a);
        ++ens.candidates;
        const StatePair pre{ens.particles[a], ens.particles[b]};
        const double E = total_energy(spec, pre);
        const double B = kernel_value(kern, E);
        if (B > B_maj) ++ens.majorant_violations;

        double residual = 1.0;
        if (levels) {
          channels.clear();
          double wsum = 0.0;
          if (E > 0.0) {
            const Vec3 V = pre[0].v - pre[1].v;
            const double Ik = internal_energy(spec, pre[0]) + internal_energy(spec, pre[1]);
            for (std::size_t kp = 0; kp < level_count(ei); ++kp) {
              for (std::size_t lp = 0; lp < level_count(ej); ++lp) {
                StatePair tgt = pre;
                tgt[0].internal = LevelIndex{kp};
                tgt[1].internal = LevelIndex{lp};
                const double dI = internal_energy(spec, tgt[0]) + internal_energy(spec, tgt[1]) - Ik;
                const double g2 = V.norm2() - 2.0 * dI / mu;
                if (g2 < 0.0) continue;
                const double w = state_weight(spec, tgt[0]) * state_weight(spec, tgt[1]) * std::sqrt(g2);
                channels.push_back({kp, lp, w});
                wsum += w;
              }
            }
          }
          residual = E > 0.0 ? wsum / (std::sqrt(E) * level_weight_sum(ei) * level_weight_sum(ej) * std::sqrt(2.0 / mu)) : 0.0;
        }

        const double p_acc = scale * std::min(1.0, B / B_maj) * residual;
        ens.max_acceptance = std::max(ens.max_acceptance, p_acc);
        if (!(sample_uniform(ens.rng) < p_acc)) continue;

        const Vec3 sigma = sample_sphere(ens.rng);
        CollisionOutcome out;
        if (levels) {
          const double x = sample_uniform(ens.rng) * wsum_of(channels);
          std::size_t c = 0;
          double acc = channels[0].weight;
          while (acc <= x && c + 1 < channels.size()) acc += channels[++c].weight;
          out = collide_discrete(spec, pre, DiscreteParams{channels[c].k, channels[c].l, sigma});
          if (!out.admissible) continue;
        } else {
          const bool pi = is_continuous(ei), pj = is_continuous(ej);
          CollisionParams params = MonatomicParams{sigma};
          if (pi && pj) {
            const double di = delta_of(ei), dj = delta_of(ej);
            const double r = sample_beta(ens.rng, 0.5 * di, 0.5 * dj);
            const double R = sample_beta(ens.rng, 1.5, 0.5 * (di + dj));
            params = BLParams{r, R, sigma};
          } else if (pi || pj) {
            params = PolyMonoParams{sample_beta(ens.rng, 1.5, 0.5 * delta_of(pi ? ei : ej)), sigma};
          }
          out = collide_borgnakke_larsen(spec, pre, params);
        }
        const auto d = invariant_defect(spec, pre, out.post);
        ens.max_relative_defect = std::max({ens.max_relative_defect, d.relative_momentum(), d.relative_energy()});
        ens.particles[a] = out.post[0];
        ens.particles[b] = out.post[1];
        ++ens.collisions;
      }
    }
  }
  ens.time += cfg.dt;
  if (ens.majorant_violations >= kMinViolationsForAbort &&
      static_cast<double>(ens.majorant_violations) > cfg.violation_tolerance * static_cast<double>(ens.candidates)) {
    std::ostringstream msg;
    msg << "kernel majorant exceeded in " << ens.majorant_violations << " of " << ens.candidates
        << " candidate pairs; rerun with a larger B_maj or majorant_safety";
    throw MajorantViolation(msg.str());
  }
}

Moments ensemble_moments(const Ensemble& ens) {
  const auto& spec = ens.spec;
  Moments m;
  Summer mass, px, py, pz, energy;
  for (const auto& p : ens.particles) {
    const double mp = spec.mass(p.species);
    mass.add(mp);
    px.add(mp * p.v.x);
    py.add(mp * p.v.y);
    pz.add(mp * p.v.z);
    energy.add(0.5 * mp * p.v.norm2() + internal_energy(spec, p));
  }
  m.momentum = Vec3{px.value(), py.value(), pz.value()};
  m.u = m.momentum / mass.value();
  m.total_energy = energy.value();

  Summer kin, I_sum;
  std::vector<std::size_t> counts(spec.size(), 0);
  std::size_t n_poly = 0;
  for (const auto& p : ens.particles) {
    kin.add(spec.mass(p.species) * (p.v - m.u).norm2());
    ++counts[p.species];
    if (!std::holds_alternative<Monatomic>(spec.species[p.species].energy)) {
      I_sum.add(internal_energy(spec, p));
      ++n_poly;
    }
  }
  m.T_kin = kin.value() / (3.0 * static_cast<double>(ens.size()) * spec.units.k_B);
  m.mean_I = n_poly > 0 ? I_sum.value() / static_cast<double>(n_poly) : 0.0;
  m.T_int = has_internal_dof(spec) ? internal_temperature_from_mean(counts, spec, I_sum.value())
                                   : std::numeric_limits<double>::quiet_NaN();
  return m;
}

double equilibrium_temperature(const Ensemble& ens) {
  const auto& spec = ens.spec;
  const Moments m = ensemble_moments(ens);
  double M = 0.0;
  std::vector<std::size_t> counts(spec.size(), 0);
  for (const auto& p : ens.particles) {
    M += spec.mass(p.species);
    ++counts[p.species];
  }
  const double E_com = m.total_energy - 0.5 * m.momentum.norm2() / M;
  const double N = static_cast<double>(ens.size());
  auto f = [&](double T) {
    double e = 1.5 * N * spec.units.k_B * T;
    for (std::size_t s = 0; s < spec.size(); ++s) e += counts[s] * mean_internal_energy(spec.species[s].energy, T, spec.units);
    return e - E_com;
  };
  double lo = 0.0, hi = E_com / (1.5 * N * spec.units.k_B);  // f(hi) >= 0
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double h_estimate(const Ensemble& ens, double T_ref, double T_low) {
  const auto& spec = ens.spec;
  const Moments m = ensemble_moments(ens);
  if (!(T_ref > 0.0)) {
    T_ref = std::max(equilibrium_temperature(ens), m.T_kin);
    if (!std::isnan(m.T_int)) T_ref = std::max(T_ref, m.T_int);
  }
  if (!(T_low > 0.0) || T_low > T_ref) T_low = T_ref;
  // internal-energy bins stay narrow against the coldest temperature
  const double spread = std::ceil(T_ref / T_low - 1e-9);
  const auto energy_bins = static_cast<std::size_t>(
      std::min(static_cast<double>(kMaxEnergyBins), static_cast<double>(kEnergyBins) * spread));
  const double N_total = static_cast<double>(ens.size());
  const double volume = N_total;  // number density 1
  const auto lists = species_lists(ens);

  Summer H;
  for (std::size_t s = 0; s < spec.size(); ++s) {
    const auto& list = lists[s];
    if (list.empty()) continue;
    const auto& e = spec.species[s].energy;
    const double n_s = static_cast<double>(list.size());
    const bool cont = is_continuous(e);
    const double delta = cont ? delta_of(e) : 0.0;
    const double kT = spec.units.k_B * T_ref;
    const double v_max = 6.0 * std::sqrt(kT / spec.mass(s));
    const double I_max = cont ? kT * (0.5 * delta + 6.0 * std::sqrt(0.5 * delta) + 4.0) : 0.0;

    std::size_t n_v = kSpeedBins, n_I = cont ? energy_bins : level_count(e);
    if (list.size() < kMinPerBin * kSpeedBins * kEnergyBins) {
      // Scott's rule, width 3.49 sd n^{-1/3} with the range spanning ~6 sd
      const auto bins = static_cast<std::size_t>(std::ceil(6.0 / (3.49 * std::pow(n_s, -1.0 / 3.0))));
      n_v = std::clamp<std::size_t>(bins, 4, kSpeedBins);
      if (cont) n_I = std::clamp<std::size_t>(bins, 4, kEnergyBins);
    }

    std::vector<double> count(n_v * n_I, 0.0);
    std::vector<std::size_t> bin(list.size());
    for (std::size_t q = 0; q < list.size(); ++q) {
      const auto& p = ens.particles[list[q]];
      const double c = (p.v - m.u).norm();
      const auto bv = std::min(n_v - 1, static_cast<std::size_t>(c / v_max * static_cast<double>(n_v)));
      std::size_t bI = 0;
      if (cont) {
        bI = std::min(n_I - 1, static_cast<std::size_t>(internal_energy(spec, p) / I_max * static_cast<double>(n_I)));
      } else if (const auto* lv = std::get_if<LevelIndex>(&p.internal)) {
        bI = std::min(n_I - 1, lv->k);
      }
      bin[q] = bv * n_I + bI;
      count[bin[q]] += 1.0;
    }
    const double dv = v_max / static_cast<double>(n_v);
    const double dI = cont ? I_max / static_cast<double>(n_I) : 1.0;
    for (std::size_t q = 0; q < list.size(); ++q) {
      const auto& p = ens.particles[list[q]];
      const std::size_t bv = bin[q] / n_I;
      const double lo = dv * static_cast<double>(bv), hi = lo + dv;
      const double shell = 4.0 * std::numbers::pi / 3.0 * (hi * hi * hi - lo * lo * lo);
      const double f = count[bin[q]] / (volume * shell * dI);
      // log f relative to the reference measure, i.e. log(f / phi)
      H.add(std::log(f) - std::log(state_weight(spec, p)));
    }
  }
  return H.value() / N_total;
}

RelaxResult run(const MixtureSpec& spec, const RelaxConfig& cfg, std::size_t N, double T_kin0, double T_int0,
                double t_end, const std::vector<double>& composition) {
  Ensemble ens = init_ensemble(spec, N, T_kin0, T_int0, Vec3{}, cfg.seed, composition);
  return run(ens, cfg, t_end);
}

RelaxResult run(Ensemble& ens, const RelaxConfig& cfg, double t_end) {
  if (!(t_end >= ens.time)) throw std::invalid_argument("run: t_end precedes the ensemble time");
  if (cfg.sample_every == 0) throw std::invalid_argument("run: sample_every must be positive");
  for (std::size_t i = 0; i < ens.spec.size(); ++i) {
    for (std::size_t j = 0; j < ens.spec.size(); ++j) (void)power_kernel(ens.spec, i, j);
  }
  if (ens.B_maj.empty()) prepare_majorants(ens, cfg);

  RelaxResult res;
  res.series.seed = cfg.seed;
  const Moments m0 = ensemble_moments(ens);
  const double T_eq = equilibrium_temperature(ens);
  const double t0 = ens.time;
  const std::uint64_t coll0 = ens.collisions;
  const double T_int0 = std::isnan(m0.T_int) ? T_eq : m0.T_int;
  const double T_ref = std::max({T_eq, m0.T_kin, T_int0});
  const double T_low = std::min({T_eq, m0.T_kin, T_int0});
  auto sample = [&]() {
    const Moments m = ensemble_moments(ens);
    res.series.rows.push_back({ens.time, m.T_kin, m.T_int, m.mean_I, h_estimate(ens, T_ref, T_low), ens.collisions});
  };

  const auto n_steps = static_cast<std::uint64_t>(std::ceil((t_end - t0) / cfg.dt - 1e-9));
  sample();
  for (std::uint64_t k = 1; k <= n_steps; ++k) {
    step(ens, cfg);
    ens.time = t0 + static_cast<double>(k) * cfg.dt;
    if (k % cfg.sample_every == 0 || k == n_steps) sample();
  }

  const Moments m1 = ensemble_moments(ens);
  auto& sum = res.summary;
  sum.T_eq = T_eq;
  sum.T_kin = m1.T_kin;
  sum.T_int = m1.T_int;
  sum.equipartition_gap = std::isnan(m1.T_int) ? 0.0 : std::abs(m1.T_kin - m1.T_int) / T_eq;
  double I_eq = 0.0;
  std::size_t n_poly = 0;
  for (const auto& p : ens.particles) {
    const auto& e = ens.spec.species[p.species].energy;
    if (std::holds_alternative<Monatomic>(e)) continue;
    I_eq += mean_internal_energy(e, T_eq, ens.spec.units);
    ++n_poly;
  }
  I_eq = n_poly > 0 ? I_eq / static_cast<double>(n_poly) : 0.0;
  sum.mean_I_ratio = I_eq > 0.0 ? m1.mean_I / I_eq : 1.0;
  sum.energy_drift = std::abs(m1.total_energy - m0.total_energy) / std::abs(m0.total_energy);
  double M = 0.0;
  for (const auto& p : ens.particles) M += ens.spec.mass(p.species);
  sum.momentum_drift = (m1.momentum - m0.momentum).norm() / std::sqrt(2.0 * M * m0.total_energy);
  const double elapsed = ens.time - t0;
  sum.collisions = ens.collisions - coll0;
  sum.collision_rate = elapsed > 0.0 ? 2.0 * static_cast<double>(sum.collisions) / (static_cast<double>(ens.size()) * elapsed) : 0.0;
  sum.candidates = ens.candidates;
  sum.majorant_violations = ens.majorant_violations;
  sum.max_relative_defect = ens.max_relative_defect;
  std::vector<double> H;
  for (const auto& r : res.series.rows) H.push_back(r.H);
  sum.h_nonincreasing = trend_nonincreasing(H);
  sum.equipartition_ok = sum.equipartition_gap <= kEquipartitionTolerance;
  sum.mean_I_ok = std::abs(sum.mean_I_ratio - 1.0) <= kEquipartitionTolerance;
  sum.energy_ok = sum.energy_drift <= kEnergyDriftTolerance;
  return res;
}

double trend_noise(const std::vector<double>& values) {
  // sd about a straight line through the second half, so a slow drift does not count as noise
  const std::size_t n = values.size();
  const std::size_t start = n - n / 2 >= 3 ? n / 2 : 0;
  const std::size_t m = n - start;
  if (m < 3) return 0.0;
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    tm += static_cast<double>(i);
    ym += values[i];
  }
  tm /= static_cast<double>(m);
  ym /= static_cast<double>(m);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    stt += (static_cast<double>(i) - tm) * (static_cast<double>(i) - tm);
    sty += (static_cast<double>(i) - tm) * (values[i] - ym);
  }
  const double slope = sty / stt;
  double ss = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double r = values[i] - ym - slope * (static_cast<double>(i) - tm);
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(m - 2));
}

std::vector<double> nonincreasing_fit(const std::vector<double>& values) {
  // pool-adjacent-violators
  std::vector<double> mean;
  std::vector<std::size_t> width;
  for (double x : values) {
    mean.push_back(x);
    width.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
      const std::size_t w = width[width.size() - 2] + width.back();
      const double m = (mean[mean.size() - 2] * static_cast<double>(width[width.size() - 2]) +
                        mean.back() * static_cast<double>(width.back())) / static_cast<double>(w);
      mean.pop_back();
      width.pop_back();
      mean.back() = m;
      width.back() = w;
    }
  }
  std::vector<double> fit;
  fit.reserve(values.size());
  for (std::size_t b = 0; b < mean.size(); ++b) fit.insert(fit.end(), width[b], mean[b]);
  return fit;
}

bool trend_nonincreasing(const std::vector<double>& values) {
  if (values.size() < 2) return true;
  double scale = 0.0;
  for (double x : values) scale = std::max(scale, std::abs(x));
  const double band = 3.0 * std::max(trend_noise(values), 1e-12 * scale);
  const auto fit = nonincreasing_fit(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - fit[i]) > band) return false;
  }
  return true;
}

void write_time_series_csv(std::ostream& os, const TimeSeries& ts) {
  os << "# seed=" << ts.seed << "\n";
  os << "t,T_kin,T_int,mean_I,H,collisions\n";
  os << std::setprecision(17);
  for (const auto& r : ts.rows) {
    os << r.t << ',' << r.T_kin << ',' << r.T_int << ',' << r.mean_I << ',' << r.H << ',' << r.collisions << '\n';
  }
}

}  // namespace polykin
