#include "polykin/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polykin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string index_str(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "kernels[" << i << "][" << j << "]";
  return os.str();
}

}  // namespace

bool is_continuous(const EnergyModel& e) { return std::holds_alternative<ContinuousPowerLaw>(e); }

bool is_discrete(const EnergyModel& e) { return std::holds_alternative<DiscreteLevels>(e); }

bool is_effectively_monatomic(const EnergyModel& e) {
  if (std::holds_alternative<Monatomic>(e)) return true;
  if (const auto* d = std::get_if<DiscreteLevels>(&e)) {
    return d->levels.size() == 1 && d->levels.front().degeneracy == 1.0;
  }
  return false;
}

double delta_of(const EnergyModel& e) {
  if (const auto* c = std::get_if<ContinuousPowerLaw>(&e)) return c->delta;
  throw std::invalid_argument("delta_of: energy model is not a continuous power law");
}

// ---------------------------------------------------------------------------

PsiFunction::PsiFunction() : name_("unit"), exponents_(PsiExponents{}) {}

PsiFunction PsiFunction::unit() { return PsiFunction{}; }

PsiFunction PsiFunction::power(PsiExponents e) {
  PsiFunction p;
  std::ostringstream os;
  os << "power(" << e.r_sym << "," << e.R << "," << e.one_minus_R << ")";
  p.name_ = os.str();
  p.exponents_ = e;
  return p;
}

PsiFunction PsiFunction::custom(std::string name, std::function<double(double, double)> fn) {
  PsiFunction p;
  p.name_ = std::move(name);
  p.exponents_.reset();
  p.fn_ = std::move(fn);
  return p;
}

bool PsiFunction::is_unit() const {
  return exponents_ && *exponents_ == PsiExponents{};
}

double PsiFunction::operator()(double r, double R) const {
  if (fn_) return fn_(r, R);
  const auto& e = *exponents_;
  double v = 1.0;
  if (e.r_sym != 0.0) v *= std::pow(r * (1.0 - r), e.r_sym);
  if (e.R != 0.0) v *= std::pow(R, e.R);
  if (e.one_minus_R != 0.0) v *= std::pow(1.0 - R, e.one_minus_R);
  return v;
}

bool is_symmetric(const PsiFunction& psi) {
  for (double r : {0.05, 0.2, 0.37, 0.5}) {
    for (double R : {0.1, 0.5, 0.9}) {
      const double a = psi(r, R), b = psi(1.0 - r, R);
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

double phi_weight(double I, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("phi_weight: delta must be positive");
  if (I < 0.0) throw std::domain_error("phi_weight: negative internal energy");
  const double p = 0.5 * delta - 1.0;
  if (p == 0.0) return 1.0;
  if (I == 0.0) {
    if (p < 0.0) throw std::domain_error("phi_weight: I = 0 with delta < 2 diverges");
    return 0.0;
  }
  return std::pow(I, p);
}

double eval_kernel(const KernelModel& model, const CollisionContext& ctx) {
  if (ctx.E < 0.0) throw std::domain_error("eval_kernel: negative energy");
  if (ctx.speed < 0.0) throw std::domain_error("eval_kernel: negative relative speed");
  return std::visit(
      overloaded{
          [&](const PowerLawE& k) {
            if (k.C == 0.0) return 0.0;
            return k.zeta == 0.0 ? k.C : k.C * std::pow(ctx.E, 0.5 * k.zeta);
          },
          [&](const PsiWeighted& k) {
            if (k.C == 0.0) return 0.0;
            const double e = k.zeta == 0.0 ? 1.0 : std::pow(ctx.E, 0.5 * k.zeta);
            return k.C * k.psi(ctx.r, ctx.R) * e;
          },
          [&](const ResonantTensored& k) {
            const double Z = ctx.I + ctx.I_star;
            if (k.C == 0.0 || ctx.I_prime < 0.0 || ctx.I_prime > Z) return 0.0;
            const double V = ctx.speed;
            const double s = std::sqrt(std::max(0.0, 1.0 - ctx.cos_theta * ctx.cos_theta));
            double kin = 0.0;
            for (KinTerm t : k.kin_terms) {
              switch (t) {
                case KinTerm::Speed: kin += V; break;
                case KinTerm::SinSpeed: kin += s * (V * V + 1.0 / V); break;
                case KinTerm::InverseSpeedPower: kin += std::pow(V, -k.zeta); break;
                case KinTerm::InverseSinPower: kin += std::pow(s, -k.zeta1); break;
              }
            }
            const double internal = std::pow(Z, 1.0 + 0.5 * k.zeta2 - ctx.delta);
            return k.C * kin * internal;
          },
      },
      model);
}

double kernel_C(const KernelModel& model) {
  return std::visit([](const auto& k) { return k.C; }, model);
}

double kernel_zeta(const KernelModel& model) {
  return std::visit([](const auto& k) { return k.zeta; }, model);
}

double resonant_kin_sphere_integral(const ResonantTensored& k, double speed) {
  constexpr double pi = std::numbers::pi;
  double total = 0.0;
  for (KinTerm t : k.kin_terms) {
    switch (t) {
      case KinTerm::Speed: total += 4.0 * pi * speed; break;
      // int_{S^2} |sin th| dsigma = 2 pi int_{-1}^{1} sqrt(1 - c^2) dc = pi^2
      case KinTerm::SinSpeed: total += pi * pi * (speed * speed + 1.0 / speed); break;
      case KinTerm::InverseSpeedPower: total += 4.0 * pi * std::pow(speed, -k.zeta); break;
      case KinTerm::InverseSinPower:
        total += 2.0 * pi * std::beta(0.5, 1.0 - 0.5 * k.zeta1);
        break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

MixtureSpec MixtureSpec::single(Species s, KernelModel k, UnitSystem u) {
  MixtureSpec spec;
  spec.species.push_back(std::move(s));
  spec.kernels = {{std::move(k)}};
  spec.units = u;
  return spec;
}

std::vector<Violation> validate(const MixtureSpec& spec) {
  std::vector<Violation> out;
  if (!(spec.units.k_B > 0.0)) out.push_back({"units", "k_B must be positive"});
  if (spec.species.empty()) out.push_back({"species", "at least one species required"});

  for (std::size_t i = 0; i < spec.species.size(); ++i) {
    const auto& s = spec.species[i];
    const std::string where = "species[" + std::to_string(i) + "]";
    if (!(s.mass > 0.0)) out.push_back({where, "mass must be positive"});
    if (const auto* c = std::get_if<ContinuousPowerLaw>(&s.energy)) {
      if (!(c->delta > 0.0)) out.push_back({where, "delta must be positive"});
    } else if (const auto* d = std::get_if<DiscreteLevels>(&s.energy)) {
      if (d->levels.empty()) out.push_back({where, "discrete levels: at least one level required"});
      for (std::size_t k = 0; k < d->levels.size(); ++k) {
        const auto& lv = d->levels[k];
        const std::string lw = where + ".levels[" + std::to_string(k) + "]";
        if (!(lv.energy >= 0.0)) out.push_back({lw, "level energy must be nonnegative"});
        if (!(lv.degeneracy > 0.0)) out.push_back({lw, "degeneracy must be positive"});
        if (k > 0 && !(lv.energy > d->levels[k - 1].energy)) {
          out.push_back({lw, "level energies must be strictly increasing"});
        }
      }
    }
  }

  const std::size_t n = spec.species.size();
  if (spec.kernels.size() != n) {
    out.push_back({"kernels", "kernel table must be N x N"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.kernels[i].size() != n) {
      out.push_back({"kernels[" + std::to_string(i) + "]", "kernel table must be N x N"});
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& k = spec.kernels[i][j];
      const std::string where = index_str(i, j);
      if (!(kernel_C(k) > 0.0)) out.push_back({where, "C must be positive"});
      if (const auto* p = std::get_if<PsiWeighted>(&k)) {
        if (!is_symmetric(p->psi)) out.push_back({where, "psi must satisfy psi(r,R) = psi(1-r,R)"});
      } else if (const auto* r = std::get_if<ResonantTensored>(&k)) {
        if (!(r->zeta >= 0.0 && r->zeta < 1.0)) out.push_back({where, "resonant zeta must lie in [0,1)"});
        if (!(r->zeta1 >= 0.0 && r->zeta1 < 0.5)) out.push_back({where, "resonant zeta1 must lie in [0,1/2)"});
        if (r->kin_terms.empty()) out.push_back({where, "resonant kernel needs at least one kinetic term"});
      }
      if (j > i && !(spec.kernels[i][j] == spec.kernels[j][i])) {
        out.push_back({where, "kernel table not symmetric: differs from " + index_str(j, i)});
      }
    }
  }
  return out;
}

}  // namespace polykin
