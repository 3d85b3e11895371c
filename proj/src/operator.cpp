#include "polykin/operator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "polykin/quadrature.hpp"

namespace polykin {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double log_gaussian_density(const Vec3& v, const Vec3& u, double kT, double m) {
  return 1.5 * std::log(m / (2.0 * std::numbers::pi * kT)) - 0.5 * m * (v - u).norm2() / kT;
}

double log_gamma_density(double x, double shape, double scale) {
  return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

/// x^{at-1}(1-x)^{bt-1} divided by the Beta(ap, bp) density at x.
double beta_ratio(double x, double at, double bt, const BetaShape& p) {
  double v = std::beta(p.a, p.b);
  if (at != p.a) v *= std::pow(x, at - p.a);
  if (bt != p.b) v *= std::pow(1.0 - x, bt - p.b);
  return v;
}

/// a - b, or exactly 0 when the two agree to within roundoff.
double snapped_difference(double a, double b, double tol) {
  const double d = a - b;
  return std::abs(d) <= tol * std::max(std::abs(a), std::abs(b)) ? 0.0 : d;
}

std::size_t level_count(const EnergyModel& e) {
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) return d->levels.size();
  return 1;
}

ParticleState state_at_level(const MixtureSpec& spec, std::size_t s, const Vec3& v, std::size_t k) {
  if (is_discrete(spec.species[s].energy)) return ParticleState::level(s, v, k);
  return ParticleState::mono(s, v);
}

bool discrete_family(Family f) { return f == Family::Discrete || f == Family::MixtureDiscrete; }

CollisionContext make_context(const MixtureSpec& spec, const StatePair& pre, double E, const Vec3& sigma) {
  CollisionContext ctx;
  const Vec3 V = pre[0].v - pre[1].v;
  ctx.speed = V.norm();
  ctx.E = E;
  ctx.I = internal_energy(spec, pre[0]);
  ctx.I_star = internal_energy(spec, pre[1]);
  ctx.cos_theta = ctx.speed > 0.0 ? V.dot(sigma) / ctx.speed : 0.0;
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&spec.species[pre[0].species].energy)) ctx.delta = c->delta;
  return ctx;
}

void sample_bl_partner(const CollisionModel& model, const Proposal& prop, const QuadratureConfig& cfg,
                       const ParticleState& w, std::size_t j, Rng& rng, std::vector<SampledCollision>& out) {
  const auto& spec = model.spec;
  const std::size_t i = w.species;
  const auto& ei = spec.species[i].energy;
  const auto& ej = spec.species[j].energy;
  const double mj = spec.mass(j);
  const bool poly_i = is_continuous(ei), poly_j = is_continuous(ej);

  ParticleState ws = ParticleState::mono(j, sample_gaussian(rng, prop.u, std::sqrt(prop.kT_v / mj)));
  double log_w = -log_gaussian_density(ws.v, prop.u, prop.kT_v, mj) + std::log(kFourPi);
  if (poly_j) {
    const double shape = cfg.gamma_shape.value_or(0.5 * delta_of(ej));
    const double Is = sample_gamma(rng, shape, prop.kT_I);
    ws.internal = ContinuousEnergy{Is};
    log_w -= log_gamma_density(Is, shape, prop.kT_I);
  }
  const Vec3 sigma = sample_sphere(rng);

  SampledCollision sc;
  sc.pre = {w, ws};
  double factor = 1.0;
  CollisionContext ctx;
  if (poly_i && poly_j) {
    const double di = delta_of(ei), dj = delta_of(ej);
    const BetaShape rs = cfg.r_shape.value_or(BetaShape{0.5 * di, 0.5 * dj});
    const BetaShape Rs = cfg.R_shape.value_or(BetaShape{1.5, 0.5 * (di + dj)});
    const double r = sample_beta(rng, rs.a, rs.b);
    const double R = sample_beta(rng, Rs.a, Rs.b);
    factor = beta_ratio(r, 0.5 * di, 0.5 * dj, rs) * beta_ratio(R, 1.5, 0.5 * (di + dj), Rs);
    sc.outcome = collide_borgnakke_larsen(spec, sc.pre, BLParams{r, R, sigma});
    ctx = make_context(spec, sc.pre, sc.outcome.E, sigma);
    ctx.r = r;
    ctx.R = R;
  } else if (poly_i || poly_j) {
    const double dp = delta_of(poly_i ? ei : ej);
    const BetaShape Rs = cfg.R_shape.value_or(BetaShape{1.5, 0.5 * dp});
    const double R = sample_beta(rng, Rs.a, Rs.b);
    factor = beta_ratio(R, 1.5, 0.5 * dp, Rs);
    sc.outcome = collide_borgnakke_larsen(spec, sc.pre, PolyMonoParams{R, sigma});
    ctx = make_context(spec, sc.pre, sc.outcome.E, sigma);
    ctx.R = R;
  } else {
    sc.outcome = collide_elastic(spec, sc.pre, sigma);
    ctx = make_context(spec, sc.pre, sc.outcome.E, sigma);
  }
  const double B = eval_kernel(spec.kernel(i, j), ctx);
  sc.weight = B * factor * std::exp(log_w);
  sc.phi = phi_ratio(spec, sc.pre, sc.outcome.post);
  out.push_back(std::move(sc));
}

void sample_resonant(const CollisionModel& model, const Proposal& prop, const QuadratureConfig& cfg,
                     const ParticleState& w, Rng& rng, std::vector<SampledCollision>& out) {
  const auto& spec = model.spec;
  const std::size_t i = w.species;
  const double m = spec.mass(i);
  const double delta = delta_of(spec.species[i].energy);
  const Vec3 vs = sample_gaussian(rng, prop.u, std::sqrt(prop.kT_v / m));
  const double shape = cfg.gamma_shape.value_or(0.5 * delta);
  const double Is = sample_gamma(rng, shape, prop.kT_I);
  const Vec3 sigma = sample_sphere(rng);
  const double log_w = -log_gaussian_density(vs, prop.u, prop.kT_v, m) - log_gamma_density(Is, shape, prop.kT_I) +
                       std::log(kFourPi);

  SampledCollision sc;
  sc.pre = {w, ParticleState::continuous(i, vs, Is)};
  const double Z = std::get<ContinuousEnergy>(w.internal).I + Is;
  if (!(Z > 0.0)) return;
  double t = 0.0, factor = 1.0;
  if (cfg.resonant_proposal == ResonantProposal::MatchedBeta) {
    t = sample_beta(rng, 0.5 * delta, 0.5 * delta);
    factor = std::beta(0.5 * delta, 0.5 * delta);
  } else {
    do {
      t = sample_uniform(rng);
    } while (t == 0.0);
    factor = 0.5 * delta == 1.0 ? 1.0 : std::pow(t * (1.0 - t), 0.5 * delta - 1.0);
  }
  const double I_prime = Z * t;
  sc.outcome = collide_resonant(spec, sc.pre, ResonantParams{I_prime, sigma});
  CollisionContext ctx = make_context(spec, sc.pre, sc.outcome.E, sigma);
  ctx.I_prime = I_prime;
  const double B = eval_kernel(spec.kernel(i, i), ctx);
  sc.weight = B * factor * std::exp(log_w);
  sc.phi = phi_ratio(spec, sc.pre, sc.outcome.post);
  out.push_back(std::move(sc));
}

void sample_discrete_partner(const CollisionModel& model, const Proposal& prop, const ParticleState& w,
                             std::size_t j, Rng& rng, std::vector<SampledCollision>& out) {
  const auto& spec = model.spec;
  const std::size_t i = w.species;
  const double mj = spec.mass(j);
  const Vec3 vs = sample_gaussian(rng, prop.u, std::sqrt(prop.kT_v / mj));
  const Vec3 sigma = sample_sphere(rng);
  const double scale = std::exp(-log_gaussian_density(vs, prop.u, prop.kT_v, mj)) * kFourPi;
  const std::size_t ni = level_count(spec.species[i].energy), nj = level_count(spec.species[j].energy);

  for (std::size_t l = 0; l < nj; ++l) {
    const StatePair pre{w, state_at_level(spec, j, vs, l)};
    const double E = total_energy(spec, pre);
    if (!(E > 0.0)) continue;
    const CollisionContext ctx = make_context(spec, pre, E, sigma);
    const double B = eval_kernel(spec.kernel(i, j), ctx);
    for (std::size_t kp = 0; kp < ni; ++kp) {
      for (std::size_t lp = 0; lp < nj; ++lp) {
        SampledCollision sc;
        sc.pre = pre;
        sc.outcome = collide_discrete(spec, pre, DiscreteParams{kp, lp, sigma});
        if (!sc.outcome.admissible) continue;
        const double Vp = (sc.outcome.post[0].v - sc.outcome.post[1].v).norm();
        const double A = B * state_weight(spec, sc.outcome.post[0]) * state_weight(spec, sc.outcome.post[1]) * Vp /
                         std::sqrt(E);
        sc.weight = A * scale;
        sc.phi = phi_ratio(spec, sc.pre, sc.outcome.post);
        out.push_back(std::move(sc));
      }
    }
  }
}

/// States w drawn from the proposal for the outer integral of weak forms:
/// one per continuous species, every level of discrete species.
struct OuterState {
  ParticleState w;
  double inv_density = 1.0;
};

void sample_outer(const CollisionModel& model, const Proposal& prop, const QuadratureConfig& cfg, Rng& rng,
                  std::vector<OuterState>& out) {
  const auto& spec = model.spec;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double m = spec.mass(i);
    const auto& e = spec.species[i].energy;
    const Vec3 v = sample_gaussian(rng, prop.u, std::sqrt(prop.kT_v / m));
    double log_p = log_gaussian_density(v, prop.u, prop.kT_v, m);
    if (is_continuous(e)) {
      const double shape = cfg.gamma_shape.value_or(0.5 * delta_of(e));
      const double I = sample_gamma(rng, shape, prop.kT_I);
      log_p += log_gamma_density(I, shape, prop.kT_I);
      out.push_back({ParticleState::continuous(i, v, I), std::exp(-log_p)});
    } else if (discrete_family(model.family)) {
      for (std::size_t k = 0; k < level_count(e); ++k) out.push_back({state_at_level(spec, i, v, k), std::exp(-log_p)});
    } else {
      out.push_back({ParticleState::mono(i, v), std::exp(-log_p)});
    }
  }
}

const Maxwellian* pick_reference(const DistributionFn& f, const DistributionFn* g = nullptr) {
  if (f.reference()) return f.reference();
  return g ? g->reference() : nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------

CollisionModel::CollisionModel(MixtureSpec s, bool resonant)
    : spec(std::move(s)), family(family_of(spec, resonant)) {}

CollisionModel::CollisionModel(MixtureSpec s, Family f) : spec(std::move(s)), family(f) {}

CollisionModel CollisionModel::with_kernel(const KernelModel& k) const {
  CollisionModel out = *this;
  for (auto& row : out.spec.kernels) {
    for (auto& entry : row) entry = k;
  }
  return out;
}

DistributionFn DistributionFn::maxwellian(Maxwellian M) {
  const bool two_t = std::holds_alternative<TwoTemperature>(M.params().temperatures) &&
                     M.params().T_kin() != M.params().T_int();
  auto shared = std::make_shared<Maxwellian>(M);
  return DistributionFn(two_t ? Kind::TwoTemperature : Kind::Maxwellian, two_t ? "two_temperature" : "maxwellian",
                        [shared](const ParticleState& w) { return (*shared)(w); }, std::move(M));
}

DistributionFn DistributionFn::perturbed(Maxwellian M, StateFn h) {
  auto shared = std::make_shared<Maxwellian>(M);
  return DistributionFn(Kind::Perturbed, "perturbed",
                        [shared, h = std::move(h)](const ParticleState& w) {
                          const double lm = shared->log_density(w);
                          return std::exp(lm) + std::exp(0.5 * lm) * h(w);
                        },
                        std::move(M));
}

DistributionFn DistributionFn::custom(std::string name, StateFn f, std::optional<Maxwellian> reference) {
  return DistributionFn(Kind::Custom, std::move(name), std::move(f), std::move(reference));
}

Perturbation Perturbation::from_h(StateFn h) { return Perturbation(std::move(h), false); }
Perturbation Perturbation::from_psi(StateFn psi) { return Perturbation(std::move(psi), true); }
Perturbation Perturbation::zero() {
  return Perturbation([](const ParticleState&) { return 0.0; }, true);
}

double Perturbation::psi(const Maxwellian& M, const ParticleState& w) const {
  if (is_psi_) return fn_(w);
  const double hv = fn_(w);
  if (hv == 0.0) return 0.0;
  return hv * std::exp(-0.5 * M.log_density(w));
}

double Perturbation::h(const Maxwellian& M, const ParticleState& w) const {
  if (!is_psi_) return fn_(w);
  const double pv = fn_(w);
  if (pv == 0.0) return 0.0;
  return pv * std::exp(0.5 * M.log_density(w));
}

void QuadratureConfig::check() const {
  if (N < 1) throw std::invalid_argument("QuadratureConfig: N must be at least 1");
  if (!std::isfinite(proposal_T)) throw std::invalid_argument("QuadratureConfig: proposal_T must be finite");
  auto check_shape = [](const std::optional<BetaShape>& s, const char* what) {
    if (s && !(s->a > 0.0 && s->b > 0.0)) {
      throw std::invalid_argument(std::string("QuadratureConfig: ") + what + " Beta shapes must be positive");
    }
  };
  check_shape(r_shape, "r");
  check_shape(R_shape, "R");
  if (gamma_shape && !(*gamma_shape > 0.0)) throw std::invalid_argument("QuadratureConfig: Gamma shape must be positive");
  if (!(cancel_tol >= 0.0)) throw std::invalid_argument("QuadratureConfig: cancel_tol must be nonnegative");
}

Proposal resolve_proposal(const CollisionModel& model, const QuadratureConfig& cfg, const Maxwellian* reference) {
  Proposal p;
  const double kB = model.spec.units.k_B;
  if (cfg.proposal_T > 0.0) {
    p.kT_v = p.kT_I = kB * cfg.proposal_T;
  } else if (reference) {
    p.kT_v = reference->kT_kin();
    p.kT_I = reference->kT_int();
  } else {
    p.kT_v = p.kT_I = kB;
  }
  if (cfg.proposal_u) {
    p.u = *cfg.proposal_u;
  } else if (reference) {
    p.u = reference->params().u;
  }
  return p;
}

void sample_collisions(const CollisionModel& model, const Proposal& prop, const QuadratureConfig& cfg,
                       const ParticleState& w, Rng& rng, std::vector<SampledCollision>& out) {
  switch (model.family) {
    case Family::Resonant:
      sample_resonant(model, prop, cfg, w, rng, out);
      return;
    case Family::Discrete:
    case Family::MixtureDiscrete:
      for (std::size_t j = 0; j < model.spec.size(); ++j) sample_discrete_partner(model, prop, w, j, rng, out);
      return;
    case Family::Monatomic:
    case Family::BorgnakkeLarsen:
    case Family::MixtureBL:
      for (std::size_t j = 0; j < model.spec.size(); ++j) sample_bl_partner(model, prop, cfg, w, j, rng, out);
      return;
  }
}

MCEstimate eval_Q(const CollisionModel& model, const DistributionFn& f, const DistributionFn& g,
                  const ParticleState& w, const QuadratureConfig& cfg) {
  cfg.check();
  check_state(model.spec, w);
  const Proposal prop = resolve_proposal(model, cfg, pick_reference(g, &f));
  const double fw = f(w);
  return run_mc(cfg.N, cfg.seed, [&](Rng& rng) {
    thread_local std::vector<SampledCollision> buf;
    buf.clear();
    sample_collisions(model, prop, cfg, w, rng, buf);
    double s = 0.0;
    for (const auto& c : buf) {
      const double gain = f(c.outcome.post[0]) * g(c.outcome.post[1]) * c.phi;
      const double loss = fw * g(c.pre[1]);
      const double d = snapped_difference(gain, loss, cfg.cancel_tol);
      if (d != 0.0) s += d * c.weight;
    }
    return s;
  });
}

MCEstimate collision_frequency(const CollisionModel& model, const Maxwellian& M, const ParticleState& w,
                               const QuadratureConfig& cfg) {
  cfg.check();
  check_state(model.spec, w);
  const Proposal prop = resolve_proposal(model, cfg, &M);
  return run_mc(cfg.N, cfg.seed, [&](Rng& rng) {
    thread_local std::vector<SampledCollision> buf;
    buf.clear();
    sample_collisions(model, prop, cfg, w, rng, buf);
    double s = 0.0;
    for (const auto& c : buf) s += M(c.pre[1]) * c.weight;
    return s;
  });
}

double collision_frequency_closed_form(double C, double n, double delta) {
  return kFourPi * C * n * std::beta(0.5 * delta, 0.5 * delta) * std::beta(1.5, delta);
}

MCEstimate eval_K(const CollisionModel& model, const Maxwellian& M, const Perturbation& h, const ParticleState& w,
                  KPart part, const QuadratureConfig& cfg) {
  cfg.check();
  check_state(model.spec, w);
  const Proposal prop = resolve_proposal(model, cfg, &M);
  const double sqrt_M = std::exp(0.5 * M.log_density(w));
  return run_mc(cfg.N, cfg.seed, [&](Rng& rng) {
    thread_local std::vector<SampledCollision> buf;
    buf.clear();
    sample_collisions(model, prop, cfg, w, rng, buf);
    double s = 0.0;
    for (const auto& c : buf) {
      double psi = 0.0;
      switch (part) {
        case KPart::K1: psi = -h.psi(M, c.pre[1]); break;
        case KPart::K2: psi = h.psi(M, c.outcome.post[1]); break;
        case KPart::K3: psi = h.psi(M, c.outcome.post[0]); break;
      }
      if (psi != 0.0) s += psi * M(c.pre[1]) * c.weight;
    }
    return sqrt_M * s;
  });
}

std::vector<TestFunction> collision_invariants(const MixtureSpec& spec) {
  auto mass = [spec](const ParticleState& w) { return spec.mass(w.species); };
  std::vector<TestFunction> out;
  out.push_back({"mass", [](const ParticleState&) { return 1.0; }});
  out.push_back({"momentum_x", [mass](const ParticleState& w) { return mass(w) * w.v.x; }});
  out.push_back({"momentum_y", [mass](const ParticleState& w) { return mass(w) * w.v.y; }});
  out.push_back({"momentum_z", [mass](const ParticleState& w) { return mass(w) * w.v.z; }});
  out.push_back({"energy", [spec, mass](const ParticleState& w) {
                   return 0.5 * mass(w) * w.v.norm2() + internal_energy(spec, w);
                 }});
  return out;
}

MCEstimate weak_moment(const CollisionModel& model, const DistributionFn& f, const StateFn& psi,
                       const QuadratureConfig& cfg) {
  cfg.check();
  const Proposal prop = resolve_proposal(model, cfg, f.reference());
  return run_mc(cfg.N, cfg.seed, [&](Rng& rng) {
    thread_local std::vector<OuterState> outer;
    thread_local std::vector<SampledCollision> buf;
    outer.clear();
    sample_outer(model, prop, cfg, rng, outer);
    double s = 0.0;
    for (const auto& o : outer) {
      buf.clear();
      sample_collisions(model, prop, cfg, o.w, rng, buf);
      if (buf.empty()) continue;
      const double fw = f(o.w);
      const double pw = psi(o.w);
      for (const auto& c : buf) {
        const double a = psi(c.outcome.post[0]), b = psi(c.outcome.post[1]), ps = psi(c.pre[1]);
        const double defect = (a + b) - (pw + ps);
        const double scale = std::abs(a) + std::abs(b) + std::abs(pw) + std::abs(ps);
        if (std::abs(defect) <= cfg.cancel_tol * scale) continue;
        s += 0.5 * fw * f(c.pre[1]) * defect * c.weight * o.inv_density;
      }
    }
    return s;
  });
}

MCEstimate entropy_production(const CollisionModel& model, const DistributionFn& f, const QuadratureConfig& cfg) {
  cfg.check();
  const Proposal prop = resolve_proposal(model, cfg, f.reference());
  return run_mc(cfg.N, cfg.seed, [&](Rng& rng) {
    thread_local std::vector<OuterState> outer;
    thread_local std::vector<SampledCollision> buf;
    outer.clear();
    sample_outer(model, prop, cfg, rng, outer);
    double s = 0.0;
    for (const auto& o : outer) {
      buf.clear();
      sample_collisions(model, prop, cfg, o.w, rng, buf);
      if (buf.empty()) continue;
      const double fw = f(o.w);
      for (const auto& c : buf) {
        const double a = f(c.outcome.post[0]) * f(c.outcome.post[1]) * c.phi;
        const double b = fw * f(c.pre[1]);
        if (!(a > 0.0 && b > 0.0)) throw std::domain_error("entropy_production: f must be positive on sampled states");
        if (snapped_difference(a, b, cfg.cancel_tol) == 0.0) continue;
        s += 0.25 * (a - b) * (std::log(a) - std::log(b)) * c.weight * o.inv_density;
      }
    }
    return s;
  });
}

// ---------------------------------------------------------------------------
// K1 matrix
// ---------------------------------------------------------------------------

namespace {

/// int Psi (r(1-r))^{delta/2-1} (1-R)^{delta-1} sqrt(R) dr dR
double psi_parameter_integral(const PsiFunction& psi, double delta) {
  if (psi.is_unit()) return std::beta(0.5 * delta, 0.5 * delta) * std::beta(1.5, delta);
  const Rule rule = two_sided_log_rule(64, 1e-14);
  return integrate_2d(rule, rule, [&](double r, double R) {
    return psi(r, R) * std::pow(r * (1.0 - r), 0.5 * delta - 1.0) * std::pow(1.0 - R, delta - 1.0) * std::sqrt(R);
  });
}

struct ParameterIntegrator {
  const MixtureSpec& spec;
  const KernelModel& kernel;
  Family family;
  double psi_factor = 1.0;

  ParameterIntegrator(const MixtureSpec& s, const KernelModel& k, Family f) : spec(s), kernel(k), family(f) {
    if (spec.size() != 1) throw std::invalid_argument("parameter_integral: single species only");
    const auto& e = spec.species[0].energy;
    if (family == Family::BorgnakkeLarsen) {
      const double delta = delta_of(e);
      if (const auto* p = std::get_if<PsiWeighted>(&kernel)) {
        psi_factor = psi_parameter_integral(p->psi, delta);
      } else if (std::holds_alternative<PowerLawE>(kernel)) {
        psi_factor = std::beta(0.5 * delta, 0.5 * delta) * std::beta(1.5, delta);
      } else {
        throw std::invalid_argument("parameter_integral: resonant kernel used with Borgnakke-Larsen rules");
      }
    } else if (family == Family::Resonant) {
      if (!std::holds_alternative<ResonantTensored>(kernel)) {
        throw std::invalid_argument("parameter_integral: resonant family needs a resonant kernel");
      }
    }
  }

  double operator()(const StatePair& pair) const {
    const double E = total_energy(spec, pair);
    switch (family) {
      case Family::Monatomic:
      case Family::BorgnakkeLarsen: {
        CollisionContext ctx;
        ctx.E = E;
        ctx.speed = (pair[0].v - pair[1].v).norm();
        const double C = kernel_C(kernel), zeta = kernel_zeta(kernel);
        if (C == 0.0) return 0.0;
        const double e_pow = zeta == 0.0 ? 1.0 : std::pow(E, 0.5 * zeta);
        return kFourPi * C * e_pow * (family == Family::Monatomic ? 1.0 : psi_factor);
      }
      case Family::Resonant: {
        const auto& k = std::get<ResonantTensored>(kernel);
        if (k.C == 0.0) return 0.0;
        const double delta = delta_of(spec.species[0].energy);
        const double Z = internal_energy(spec, pair[0]) + internal_energy(spec, pair[1]);
        const double speed = (pair[0].v - pair[1].v).norm();
        return k.C * resonant_kin_sphere_integral(k, speed) * std::pow(Z, 1.0 + 0.5 * k.zeta2 - delta) *
               std::beta(0.5 * delta, 0.5 * delta);
      }
      case Family::Discrete: {
        if (!(E > 0.0) || kernel_C(kernel) == 0.0) return 0.0;
        CollisionContext ctx = make_context(spec, pair, E, Vec3{1.0, 0.0, 0.0});
        const double B = eval_kernel(kernel, ctx);
        const std::size_t n = level_count(spec.species[0].energy);
        double total = 0.0;
        for (std::size_t kp = 0; kp < n; ++kp) {
          for (std::size_t lp = 0; lp < n; ++lp) {
            const auto out = collide_discrete(spec, pair, DiscreteParams{kp, lp, Vec3{1.0, 0.0, 0.0}});
            if (!out.admissible) continue;
            const double Vp = (out.post[0].v - out.post[1].v).norm();
            total += state_weight(spec, out.post[0]) * state_weight(spec, out.post[1]) * Vp;
          }
        }
        return kFourPi * B * total / std::sqrt(E);
      }
      default:
        throw std::invalid_argument("parameter_integral: mixtures are not supported");
    }
  }
};

}  // namespace

double parameter_integral(const MixtureSpec& spec, const KernelModel& kernel, Family family, const StatePair& pair) {
  return ParameterIntegrator(spec, kernel, family)(pair);
}

K1Matrix::K1Matrix(std::vector<K1Node> nodes, std::vector<double> values) : nodes_(std::move(nodes)), k_(std::move(values)) {
  if (k_.size() != nodes_.size() * nodes_.size()) throw std::invalid_argument("K1Matrix: size mismatch");
}

double K1Matrix::row_norm(std::size_t i) const {
  const std::size_t n = size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += nodes_[j].weight * k_[i * n + j] * k_[i * n + j];
  return std::sqrt(s);
}

double K1Matrix::hs_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double r = row_norm(i);
    s += nodes_[i].weight * r * r;
  }
  return std::sqrt(s);
}

double K1Matrix::symmetry_defect() const {
  const std::size_t n = size();
  double max_abs = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      max_abs = std::max(max_abs, std::abs(k_[i * n + j]));
      max_diff = std::max(max_diff, std::abs(k_[i * n + j] - k_[j * n + i]));
    }
  }
  return max_abs > 0.0 ? max_diff / max_abs : 0.0;
}

std::vector<double> K1Matrix::apply(const std::vector<double>& h) const {
  const std::size_t n = size();
  if (h.size() != n) throw std::invalid_argument("K1Matrix::apply: size mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += nodes_[j].weight * k_[i * n + j] * h[j];
    out[i] = s;
  }
  return out;
}

K1Matrix assemble_K1(const K1Grid& grid, const Maxwellian& M, const KernelModel& kernel) {
  const auto& spec = M.spec();
  if (grid.n_v == 0) throw std::invalid_argument("assemble_K1: empty velocity grid");
  if (spec.size() != 1) throw std::invalid_argument("assemble_K1: single species only");
  const auto& energy = spec.species[0].energy;
  const bool continuous = is_continuous(energy);
  if (continuous && grid.n_I == 0) throw std::invalid_argument("assemble_K1: empty internal-energy grid");

  const ParameterIntegrator integrate(spec, kernel, M.family());
  const double m = spec.mass(0);
  const Vec3 u = M.params().u;

  // velocity: v = u + sqrt(2 kT/m) x with Hermite weight exp(-x^2)
  const Rule gh = gauss_hermite(grid.n_v);
  const double vscale = std::sqrt(2.0 * M.kT_kin() / m);
  std::vector<double> vx(grid.n_v), vw(grid.n_v);
  for (std::size_t a = 0; a < grid.n_v; ++a) {
    vx[a] = vscale * gh.x[a];
    vw[a] = vscale * gh.w[a] * std::exp(gh.x[a] * gh.x[a]);
  }

  std::vector<double> Ix{0.0}, Iw{1.0};
  std::vector<std::size_t> levels{0};
  if (continuous) {
    const double alpha = 0.5 * delta_of(energy) - 1.0;
    const Rule gl = gauss_laguerre(grid.n_I, alpha);
    const double kT = M.kT_int();
    Ix.resize(grid.n_I);
    Iw.resize(grid.n_I);
    for (std::size_t b = 0; b < grid.n_I; ++b) {
      Ix[b] = kT * gl.x[b];
      Iw[b] = kT * gl.w[b] * std::exp(gl.x[b] - alpha * std::log(gl.x[b]));
    }
  } else if (const auto* d = std::get_if<DiscreteLevels>(&energy)) {
    levels.resize(d->levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) levels[k] = k;
  }

  std::vector<K1Node> nodes;
  for (std::size_t a = 0; a < grid.n_v; ++a) {
    for (std::size_t b = 0; b < grid.n_v; ++b) {
      for (std::size_t c = 0; c < grid.n_v; ++c) {
        const Vec3 v = u + Vec3{vx[a], vx[b], vx[c]};
        const double wv = vw[a] * vw[b] * vw[c];
        if (continuous) {
          for (std::size_t q = 0; q < Ix.size(); ++q) nodes.push_back({ParticleState::continuous(0, v, Ix[q]), wv * Iw[q]});
        } else if (is_discrete(energy)) {
          for (std::size_t k : levels) nodes.push_back({ParticleState::level(0, v, k), wv});
        } else {
          nodes.push_back({ParticleState::mono(0, v), wv});
        }
      }
    }
  }

  const std::size_t n = nodes.size();
  std::vector<double> half_M(n);
  for (std::size_t i = 0; i < n; ++i) half_M[i] = std::exp(0.5 * M.log_density(nodes[i].w));
  std::vector<double> k(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double val = -half_M[i] * half_M[j] * integrate({nodes[i].w, nodes[j].w});
      k[i * n + j] = val;
      k[j * n + i] = val;
    }
  }
  return K1Matrix(std::move(nodes), std::move(k));
}

void write_k1_csv(std::ostream& os, const K1Matrix& K) {
  os << "node_index,v,I,k1_row_norm\n";
  os << std::setprecision(17);
  const auto& spec_nodes = K.nodes();
  for (std::size_t i = 0; i < K.size(); ++i) {
    const auto& w = spec_nodes[i].w;
    double I = 0.0;
    if (const auto* c = std::get_if<ContinuousEnergy>(&w.internal)) I = c->I;
    if (const auto* l = std::get_if<LevelIndex>(&w.internal)) I = static_cast<double>(l->k);
    os << i << ',' << w.v.norm() << ',' << I << ',' << K.row_norm(i) << '\n';
  }
}

// ---------------------------------------------------------------------------
// k2 integrability
// ---------------------------------------------------------------------------

std::vector<CornerExponent> k2_corner_exponents(double delta, double zeta, const PsiExponents& e) {
  return {{"r", 0.5 * delta - 2.0 + 2.0 * e.r_sym},
          {"1-r", delta - 3.0 - zeta + 2.0 * e.r_sym},
          {"R", 1.0 + 2.0 * e.R},
          {"1-R", 1.5 * delta - 3.0 - zeta + 2.0 * e.one_minus_R}};
}

double k2_partial_integral(double delta, double zeta, const PsiFunction& psi, double eps) {
  const Rule rule = two_sided_log_rule(48, eps);
  const double pr = 0.5 * delta - 2.0, p1r = delta - 3.0 - zeta, p1R = 1.5 * delta - 3.0 - zeta;
  return integrate_2d(rule, rule, [&](double r, double R) {
    const double ps = psi(r, R);
    return ps * ps * std::pow(1.0 - r, p1r) * std::pow(r, pr) * R * std::pow(1.0 - R, p1R);
  });
}

K2Diagnostic k2_integrability_diagnostic(double delta, double zeta, const PsiFunction& psi) {
  if (!(delta > 0.0)) throw std::invalid_argument("k2 diagnostic: delta must be positive");
  if (!(zeta > -1.0)) throw std::invalid_argument("k2 diagnostic: zeta must exceed -1");
  if (!is_symmetric(psi)) throw std::invalid_argument("k2 diagnostic: psi must satisfy psi(r,R) = psi(1-r,R)");

  K2Diagnostic d;
  for (int p = 1; p <= 6; ++p) {
    const double eps = std::pow(10.0, -p);
    d.epsilons.push_back(eps);
    d.partial_integrals.push_back(k2_partial_integral(delta, zeta, psi, eps));
  }
  const double last = d.partial_integrals.back();
  const double prev = d.partial_integrals[d.partial_integrals.size() - 2];
  d.last_relative_change = std::isfinite(last) && last != 0.0 ? std::abs(last - prev) / std::abs(last)
                                                              : std::numeric_limits<double>::infinity();
  d.numeric_integrable = d.last_relative_change < kCauchyTolerance;

  if (const auto& e = psi.exponents()) {
    d.exponents = k2_corner_exponents(delta, zeta, *e);
    d.mirror_exponents = d.exponents;
    std::swap(d.mirror_exponents[0].value, d.mirror_exponents[1].value);
    bool ok = true;
    for (const auto& c : d.exponents) ok = ok && c.value > -1.0;
    for (const auto& c : d.mirror_exponents) ok = ok && c.value > -1.0;
    d.analytic_integrable = ok;
    d.inconsistent = ok != d.numeric_integrable;
    d.verdict = ok ? Integrability::Integrable : Integrability::Divergent;
  } else {
    d.verdict = d.numeric_integrable ? Integrability::Integrable : Integrability::Divergent;
  }
  return d;
}

void write_k2_csv(std::ostream& os, const K2Diagnostic& d) {
  os << "epsilon,partial_integral\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < d.epsilons.size(); ++i) os << d.epsilons[i] << ',' << d.partial_integrals[i] << '\n';
}

std::string_view integrability_name(Integrability v) {
  return v == Integrability::Integrable ? "integrable" : "divergent";
}

}  // namespace polykin
