#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>

#include "polykin/model.hpp"
#include "polykin/vec3.hpp"

namespace polykin {

// ---------------------------------------------------------------------------
// Particle state w = (v, I), w = (v, k) or w = v
// ---------------------------------------------------------------------------

struct NoInternal {
  friend bool operator==(const NoInternal&, const NoInternal&) = default;
};
struct ContinuousEnergy {
  double I = 0.0;
  friend bool operator==(const ContinuousEnergy&, const ContinuousEnergy&) = default;
};
struct LevelIndex {
  std::size_t k = 0;
  friend bool operator==(const LevelIndex&, const LevelIndex&) = default;
};

using InternalState = std::variant<NoInternal, ContinuousEnergy, LevelIndex>;

struct ParticleState {
  std::size_t species = 0;
  Vec3 v;
  InternalState internal = NoInternal{};

  static ParticleState mono(std::size_t s, Vec3 v) { return {s, v, NoInternal{}}; }
  static ParticleState continuous(std::size_t s, Vec3 v, double I) { return {s, v, ContinuousEnergy{I}}; }
  static ParticleState level(std::size_t s, Vec3 v, std::size_t k) { return {s, v, LevelIndex{k}}; }

  friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

using StatePair = std::array<ParticleState, 2>;

/// Throws std::invalid_argument if the internal variant does not match the
/// species' energy model (monatomic species in a discrete table may use level 0).
void check_state(const MixtureSpec& spec, const ParticleState& w);

/// 0 for monatomic, I for continuous, I^(k) for discrete.
[[nodiscard]] double internal_energy(const MixtureSpec& spec, const ParticleState& w);

/// Degeneracy / weight phi of the state (1 for monatomic).
[[nodiscard]] double state_weight(const MixtureSpec& spec, const ParticleState& w);

/// Unit collision direction. Construction rejects | |s| - 1 | > 1e-12 and renormalizes.
class Direction {
 public:
  explicit Direction(const Vec3& s);
  [[nodiscard]] const Vec3& value() const { return s_; }
  static constexpr double tolerance = 1e-12;

 private:
  Vec3 s_;
};

// ---------------------------------------------------------------------------
// Collision parameters per family
// ---------------------------------------------------------------------------

struct MonatomicParams {
  Vec3 sigma;
};
struct BLParams {
  double r = 0.5;
  double R = 0.5;
  Vec3 sigma;
};
struct PolyMonoParams {
  double R = 0.5;
  Vec3 sigma;
};
struct ResonantParams {
  double I_prime = 0.0;
  Vec3 sigma;
};
struct DiscreteParams {
  std::size_t k_prime = 0;
  std::size_t l_prime = 0;
  Vec3 sigma;
};

using CollisionParams =
    std::variant<MonatomicParams, BLParams, PolyMonoParams, ResonantParams, DiscreteParams>;

struct CollisionOutcome {
  StatePair post;
  bool admissible = true;
  double E = 0.0;
  std::optional<double> jacobian;
};

/// Center-of-mass total energy mu|V|^2/2 + internal energies of the pair.
[[nodiscard]] double total_energy(const MixtureSpec& spec, const StatePair& pair);

/// Single-species elastic rule.
[[nodiscard]] std::array<Vec3, 2> collide_monatomic(const Vec3& v, const Vec3& v_star, const Vec3& sigma);

/// Elastic rule for arbitrary masses (reduces to collide_monatomic when equal).
[[nodiscard]] CollisionOutcome collide_elastic(const MixtureSpec& spec, const StatePair& pair,
                                               const Vec3& sigma);

/// Borgnakke-Larsen exchange. BLParams for poly-poly, PolyMonoParams for
/// poly-mono in either order; monatomic pairs fall through to the elastic rule.
[[nodiscard]] CollisionOutcome collide_borgnakke_larsen(const MixtureSpec& spec, const StatePair& pair,
                                                        const CollisionParams& params);

/// Kinetic and internal energies conserved separately. I_* ' = I + I_* - I'.
[[nodiscard]] CollisionOutcome collide_resonant(const MixtureSpec& spec, const StatePair& pair,
                                                const ResonantParams& params);

/// Discrete-level transition (k,l) -> (k',l'). Inadmissible when the energy gap
/// exceeds the relative kinetic energy; post states are then copies of pre.
[[nodiscard]] CollisionOutcome collide_discrete(const MixtureSpec& spec, const StatePair& pair,
                                                const DiscreteParams& params);

/// Dispatch on the params variant.
[[nodiscard]] CollisionOutcome collide(const MixtureSpec& spec, const StatePair& pair,
                                       const CollisionParams& params);

/// Parameters (r', R', sigma') of the reverse collision, read off the first pair.
struct InverseParameters {
  double r = 0.0;
  double R = 0.0;
  Vec3 sigma;
  bool r_defined = true;
  bool sigma_defined = true;
};

[[nodiscard]] InverseParameters inverse_parameters(const MixtureSpec& spec, const StatePair& pre,
                                                   const StatePair& post);

struct InvariantDefect {
  Vec3 momentum;    // post - pre
  double energy = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
  double momentum_scale = 0.0;  // sum of m|v| over the pre pair
  double energy_scale = 0.0;    // lab-frame total energy of the pre pair

  [[nodiscard]] double relative_momentum() const;
  [[nodiscard]] double relative_energy() const;
  [[nodiscard]] double relative_kinetic() const;
  [[nodiscard]] double relative_internal() const;
};

[[nodiscard]] InvariantDefect invariant_defect(const MixtureSpec& spec, const StatePair& pre,
                                               const StatePair& post);

/// Jacobian of (v_*, I_*) -> (v'_*, I'_*) for the single-species BL rules.
[[nodiscard]] double jacobian_bl(double r, double R);

/// Phi = prod phi(pre) / prod phi(post) over the polyatomic participants.
[[nodiscard]] double phi_ratio(const MixtureSpec& spec, const StatePair& pre, const StatePair& post);

}  // namespace polykin
