#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace polykin {

/// Boltzmann constant carrier. Everything defaults to nondimensional k_B = 1.
struct UnitSystem {
  double k_B = 1.0;
};

// ---------------------------------------------------------------------------
// Internal-energy structure of a species
// ---------------------------------------------------------------------------

struct Monatomic {};

/// Continuous internal energy with weight phi(I) = I^{delta/2 - 1}.
struct ContinuousPowerLaw {
  double delta = 2.0;
};

struct EnergyLevel {
  double energy = 0.0;
  double degeneracy = 1.0;
};

/// Finite set of internal energies, strictly increasing, with degeneracies.
struct DiscreteLevels {
  std::vector<EnergyLevel> levels;
};

using EnergyModel = std::variant<Monatomic, ContinuousPowerLaw, DiscreteLevels>;

[[nodiscard]] bool is_continuous(const EnergyModel& e);
[[nodiscard]] bool is_discrete(const EnergyModel& e);
/// Monatomic, or a single discrete level of unit degeneracy.
[[nodiscard]] bool is_effectively_monatomic(const EnergyModel& e);
/// delta of a continuous model; throws std::invalid_argument otherwise.
[[nodiscard]] double delta_of(const EnergyModel& e);

struct Species {
  std::string label;
  double mass = 1.0;
  EnergyModel energy = Monatomic{};
};

// ---------------------------------------------------------------------------
// Collision kernels
// ---------------------------------------------------------------------------

/// Psi(r,R) = (r(1-r))^r_sym * R^R * (1-R)^one_minus_R.
struct PsiExponents {
  double r_sym = 0.0;
  double R = 0.0;
  double one_minus_R = 0.0;
  friend bool operator==(const PsiExponents&, const PsiExponents&) = default;
};

/// Weight on the Borgnakke-Larsen parameters (r,R). Power-law forms keep their
/// exponents so integrability can be decided analytically; custom forms are
/// opaque and only numerically checkable.
class PsiFunction {
 public:
  PsiFunction();  // Psi == 1

  static PsiFunction unit();
  static PsiFunction power(PsiExponents e);
  static PsiFunction custom(std::string name, std::function<double(double, double)> fn);

  double operator()(double r, double R) const;

  [[nodiscard]] const std::optional<PsiExponents>& exponents() const { return exponents_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] bool is_unit() const;

  friend bool operator==(const PsiFunction& a, const PsiFunction& b) {
    return a.name_ == b.name_ && a.exponents_ == b.exponents_;
  }

 private:
  std::string name_;
  std::optional<PsiExponents> exponents_;
  std::function<double(double, double)> fn_;
};

/// Psi(r,R) = Psi(1-r,R) on a fixed probe set of (r,R).
[[nodiscard]] bool is_symmetric(const PsiFunction& psi);

/// B = C E^{zeta/2}
struct PowerLawE {
  double C = 1.0;
  double zeta = 0.0;
  friend bool operator==(const PowerLawE&, const PowerLawE&) = default;
};

/// B = C Psi(r,R) E^{zeta/2}
struct PsiWeighted {
  double C = 1.0;
  double zeta = 0.0;
  PsiFunction psi;
  friend bool operator==(const PsiWeighted&, const PsiWeighted&) = default;
};

/// Terms of the kinetic factor of the tensored resonant kernel.
enum class KinTerm {
  Speed,              // |V|
  SinSpeed,           // |sin th| (|V|^2 + |V|^-1)
  InverseSpeedPower,  // |V|^-zeta
  InverseSinPower     // |sin th|^-zeta1
};

/// B = C b_kin(|V|, cos th) (I + I_*)^{1 + zeta2/2 - delta} 1_{[0, I+I_*]}(I')
struct ResonantTensored {
  double C = 1.0;
  double zeta = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  std::vector<KinTerm> kin_terms{KinTerm::Speed};
  friend bool operator==(const ResonantTensored&, const ResonantTensored&) = default;
};

using KernelModel = std::variant<PowerLawE, PsiWeighted, ResonantTensored>;

/// Everything a kernel may depend on for one collision configuration.
struct CollisionContext {
  double speed = 0.0;  // |V|
  double E = 0.0;      // total energy in the center-of-mass frame
  double I = 0.0;
  double I_star = 0.0;
  double I_prime = 0.0;
  double r = 0.5;
  double R = 0.5;
  double cos_theta = 0.0;
  double delta = 2.0;  // needed by the resonant internal factor
};

/// phi(I) = I^{delta/2 - 1}. Throws std::domain_error at I = 0 with delta < 2.
[[nodiscard]] double phi_weight(double I, double delta);

/// Kernel value; throws std::domain_error for negative E or |V|.
[[nodiscard]] double eval_kernel(const KernelModel& model, const CollisionContext& ctx);

[[nodiscard]] double kernel_C(const KernelModel& model);
[[nodiscard]] double kernel_zeta(const KernelModel& model);

/// Integral of the kinetic factor b_kin over the unit sphere of sigma, per unit C.
/// Closed forms per term; depends on |V| only.
[[nodiscard]] double resonant_kin_sphere_integral(const ResonantTensored& k, double speed);

// ---------------------------------------------------------------------------
// Mixtures
// ---------------------------------------------------------------------------

struct MixtureSpec {
  std::vector<Species> species;
  std::vector<std::vector<KernelModel>> kernels;
  UnitSystem units;

  [[nodiscard]] std::size_t size() const { return species.size(); }
  [[nodiscard]] const KernelModel& kernel(std::size_t i, std::size_t j) const {
    return kernels.at(i).at(j);
  }
  [[nodiscard]] double mass(std::size_t i) const { return species.at(i).mass; }

  static MixtureSpec single(Species s, KernelModel k, UnitSystem u = {});
};

struct Violation {
  std::string where;
  std::string what;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// All invariant violations, in species order then kernel-table order.
[[nodiscard]] std::vector<Violation> validate(const MixtureSpec& spec);

[[nodiscard]] inline double reduced_mass(double mi, double mj) { return mi * mj / (mi + mj); }

}  // namespace polykin
