#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polykin/collide.hpp"
#include "polykin/equilib.hpp"
#include "polykin/mc.hpp"
#include "polykin/model.hpp"

namespace polykin {

/// Species table, kernels and collision family the operator is built from.
struct CollisionModel {
  MixtureSpec spec;
  Family family;

  CollisionModel(MixtureSpec s, bool resonant = false);
  CollisionModel(MixtureSpec s, Family f);

  /// Same species with every kernel entry replaced by `k`.
  [[nodiscard]] CollisionModel with_kernel(const KernelModel& k) const;
};

using StateFn = std::function<double(const ParticleState&)>;

/// Nonnegative function on states. Maxwellian-based kinds remember their base
/// so estimators can center proposals on it.
class DistributionFn {
 public:
  enum class Kind { Maxwellian, TwoTemperature, Perturbed, Custom };

  static DistributionFn maxwellian(Maxwellian M);
  /// f = M + M^{1/2} h.
  static DistributionFn perturbed(Maxwellian M, StateFn h);
  static DistributionFn custom(std::string name, StateFn f, std::optional<Maxwellian> reference = std::nullopt);

  double operator()(const ParticleState& w) const { return fn_(w); }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const Maxwellian* reference() const { return ref_ ? &*ref_ : nullptr; }

 private:
  DistributionFn(Kind k, std::string name, StateFn fn, std::optional<Maxwellian> ref)
      : kind_(k), name_(std::move(name)), fn_(std::move(fn)), ref_(std::move(ref)) {}
  Kind kind_;
  std::string name_;
  StateFn fn_;
  std::optional<Maxwellian> ref_;
};

/// Perturbation of M, given either as h or as psi = M^{-1/2} h.
class Perturbation {
 public:
  static Perturbation from_h(StateFn h);
  static Perturbation from_psi(StateFn psi);
  static Perturbation zero();

  [[nodiscard]] double psi(const Maxwellian& M, const ParticleState& w) const;
  [[nodiscard]] double h(const Maxwellian& M, const ParticleState& w) const;

 private:
  Perturbation(StateFn fn, bool is_psi) : fn_(std::move(fn)), is_psi_(is_psi) {}
  StateFn fn_;
  bool is_psi_;
};

enum class ResonantProposal { MatchedBeta, Uniform };

struct BetaShape {
  double a = 1.0;
  double b = 1.0;
};

struct QuadratureConfig {
  std::size_t N = 100000;
  std::uint64_t seed = 1;
  /// Proposal temperature for partner velocities and internal energies;
  /// <= 0 takes the reference Maxwellian's (kinetic, internal) temperatures.
  double proposal_T = 0.0;
  std::optional<Vec3> proposal_u;
  /// Overrides of the (r, R) Beta shapes; by default they match the A factor.
  std::optional<BetaShape> r_shape;
  std::optional<BetaShape> R_shape;
  /// Shape of the Gamma proposal for I_*; default delta_j / 2.
  std::optional<double> gamma_shape;
  ResonantProposal resonant_proposal = ResonantProposal::MatchedBeta;
  /// Relative threshold below which gain - loss and invariant defects are
  /// treated as exact cancellations.
  double cancel_tol = 1e-12;

  /// Throws std::invalid_argument when a proposal density could vanish on the domain.
  void check() const;
};

/// One sampled W for a fixed w: the pre pair (w, w_*), the outcome of the
/// collision and A(w, W) / p(W) with p the proposal density of W.
struct SampledCollision {
  StatePair pre;
  CollisionOutcome outcome;
  double phi = 1.0;     // Phi of the collision
  double weight = 0.0;  // A / p
};

/// Proposal centering used by the samplers.
struct Proposal {
  double kT_v = 1.0;
  double kT_I = 1.0;
  Vec3 u;
};

[[nodiscard]] Proposal resolve_proposal(const CollisionModel& model, const QuadratureConfig& cfg,
                                        const Maxwellian* reference);

/// Draws the integration variable W for the state w (all partner species and,
/// for discrete levels, all channels) and appends the resulting collisions.
void sample_collisions(const CollisionModel& model, const Proposal& prop, const QuadratureConfig& cfg,
                       const ParticleState& w, Rng& rng, std::vector<SampledCollision>& out);

/// Q(f, g)(w) = int (f' g'_* Phi - f g_*) A dW.
[[nodiscard]] MCEstimate eval_Q(const CollisionModel& model, const DistributionFn& f, const DistributionFn& g,
                                const ParticleState& w, const QuadratureConfig& cfg);

/// nu(w) = int M_* A dW.
[[nodiscard]] MCEstimate collision_frequency(const CollisionModel& model, const Maxwellian& M,
                                             const ParticleState& w, const QuadratureConfig& cfg);

/// Closed form 4 pi C n B(delta/2, delta/2) B(3/2, delta) for B = C (zeta = 0), single species.
[[nodiscard]] double collision_frequency_closed_form(double C, double n, double delta);

enum class KPart { K1 = 1, K2 = 2, K3 = 3 };

/// One of the three contributions of K h(w).
[[nodiscard]] MCEstimate eval_K(const CollisionModel& model, const Maxwellian& M, const Perturbation& h,
                                const ParticleState& w, KPart part, const QuadratureConfig& cfg);

/// Test function with a name, for weak moments.
struct TestFunction {
  std::string name;
  StateFn psi;
};

/// 1, m v_x, m v_y, m v_z and m|v|^2/2 + I.
[[nodiscard]] std::vector<TestFunction> collision_invariants(const MixtureSpec& spec);

/// sum_i int Q_i(f, f) psi_i through the symmetrized form
/// 1/2 sum_ij int f f_* (psi' + psi'_* - psi - psi_*) A.
[[nodiscard]] MCEstimate weak_moment(const CollisionModel& model, const DistributionFn& f, const StateFn& psi,
                                     const QuadratureConfig& cfg);

/// Entropy production 1/4 sum_ij int (a - b)(log a - log b) A with a = f' f'_* Phi, b = f f_*.
/// Every sample term is nonnegative; throws std::domain_error if f <= 0 is sampled.
[[nodiscard]] MCEstimate entropy_production(const CollisionModel& model, const DistributionFn& f,
                                            const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------
// K1 as a matrix on a quadrature grid
// ---------------------------------------------------------------------------

struct K1Grid {
  std::size_t n_v = 6;  // Gauss-Hermite nodes per velocity component
  std::size_t n_I = 4;  // Gauss-Laguerre nodes in the internal energy (continuous species)
};

struct K1Node {
  ParticleState w;
  double weight = 0.0;  // Lebesgue quadrature weight of the node
};

class K1Matrix {
 public:
  K1Matrix(std::vector<K1Node> nodes, std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<K1Node>& nodes() const { return nodes_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return k_[i * nodes_.size() + j]; }

  /// sqrt(sum_ij w_i w_j k1(i,j)^2), the Hilbert-Schmidt norm on the grid.
  [[nodiscard]] double hs_norm() const;
  /// sqrt(sum_j w_j k1(i,j)^2).
  [[nodiscard]] double row_norm(std::size_t i) const;
  /// max |k1(i,j) - k1(j,i)| / max |k1|.
  [[nodiscard]] double symmetry_defect() const;
  /// (K1 h)(w_i) ~ sum_j w_j k1(i,j) h(w_j).
  [[nodiscard]] std::vector<double> apply(const std::vector<double>& h_at_nodes) const;

 private:
  std::vector<K1Node> nodes_;
  std::vector<double> k_;
};

/// k1(w, w_*) = -M^{1/2}(w) M^{1/2}(w_*) int A(w, W) over the collision
/// parameters, on a tensor grid of Gauss nodes matched to M. Single species.
[[nodiscard]] K1Matrix assemble_K1(const K1Grid& grid, const Maxwellian& M, const KernelModel& kernel);

/// Integral of A over the collision parameters for a fixed pair (w, w_*).
[[nodiscard]] double parameter_integral(const MixtureSpec& spec, const KernelModel& kernel, Family family,
                                        const StatePair& pair);

void write_k1_csv(std::ostream& os, const K1Matrix& K);

// ---------------------------------------------------------------------------
// Integrability of the k2 kernel in (r, R)
// ---------------------------------------------------------------------------

struct CornerExponent {
  std::string factor;  // "r", "1-r", "R", "1-R"
  double value = 0.0;
};

enum class Integrability { Integrable, Divergent };

struct K2Diagnostic {
  std::vector<double> epsilons;
  std::vector<double> partial_integrals;
  double last_relative_change = 0.0;
  bool numeric_integrable = false;
  /// Known when Psi is a power form.
  std::optional<bool> analytic_integrable;
  /// Exponents of the k2 integrand and of its mirror image r <-> 1 - r.
  std::vector<CornerExponent> exponents;
  std::vector<CornerExponent> mirror_exponents;
  Integrability verdict = Integrability::Divergent;
  bool inconsistent = false;
};

inline constexpr double kCauchyTolerance = 0.01;

/// Partial integrals of Psi^2 (1-r)^{delta-3-zeta} r^{delta/2-2} R (1-R)^{3delta/2-3-zeta}
/// over (eps, 1-eps)^2 for eps = 1e-1 ... 1e-6.
[[nodiscard]] K2Diagnostic k2_integrability_diagnostic(double delta, double zeta,
                                                       const PsiFunction& psi = PsiFunction::unit());

/// Partial integral for one eps.
[[nodiscard]] double k2_partial_integral(double delta, double zeta, const PsiFunction& psi, double eps);

/// Exponents of the integrand at r = 0, r = 1, R = 0, R = 1 for Psi = (r(1-r))^a R^b (1-R)^c.
[[nodiscard]] std::vector<CornerExponent> k2_corner_exponents(double delta, double zeta, const PsiExponents& e);

void write_k2_csv(std::ostream& os, const K2Diagnostic& d);

[[nodiscard]] std::string_view integrability_name(Integrability v);

}  // namespace polykin
