#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polykin/model.hpp"

namespace polykin {

enum class HypothesisId {
  H1_monatomic,
  H2_single_BL,
  H3_single_Psi,
  H4_resonant,
  H5_discrete,
  H6_mixture_BL,
  H7_mixture_Psi
};

[[nodiscard]] std::string_view hypothesis_name(HypothesisId id);
[[nodiscard]] std::optional<HypothesisId> parse_hypothesis(std::string_view name);

/// One condition of a hypothesis and how far it is from failing.
/// Strict conditions need slack > 0, the others slack >= 0.
struct Margin {
  std::string condition;
  double slack = 0.0;
  bool strict = false;

  [[nodiscard]] bool holds() const { return strict ? slack > 0.0 : slack >= 0.0; }
};

struct Verdict {
  HypothesisId hypothesis = HypothesisId::H2_single_BL;
  bool applicable = true;
  bool satisfied = false;
  std::string binding_condition;  // the tightest (or a failing) condition
  std::vector<Margin> margins;
  std::string note;
};

/// Verdict from margins: satisfied iff every margin holds; the binding
/// condition is the first failing one, else the one with least slack.
[[nodiscard]] Verdict make_verdict(HypothesisId id, std::vector<Margin> margins);

struct SingleOptions {
  /// Accept -1 < zeta <= delta + 1 for H2 instead of -1 < zeta <= 2.
  bool extended_zeta_interval = false;
  /// Weight for H3; power forms are decided from their exponents, custom
  /// forms by the numerical k2 diagnostic.
  PsiFunction psi = PsiFunction::unit();
};

/// H2 or H3 for B = C Psi E^{zeta/2}.
[[nodiscard]] Verdict check_single(double delta, double zeta, HypothesisId id, const SingleOptions& opts = {});

enum class MonatomicBound { EPower, SpeedBound };

/// H1: bound C|V|(1 + |V|^{zeta-2}) with 0 < zeta < 1; not applicable to E-power kernels.
[[nodiscard]] Verdict check_monatomic(double zeta, MonatomicBound form);

/// H4 for the tensored resonant kernel.
[[nodiscard]] Verdict check_resonant(double delta, double zeta, double zeta1, double zeta2);

/// H5 for B = C E^{zeta/2} with discrete internal energies.
[[nodiscard]] Verdict check_discrete(double zeta);

/// Verdict for one unordered species pair of a mixture.
struct PairVerdict {
  std::size_t i = 0;
  std::size_t j = 0;
  Verdict verdict;
};

/// H6 or H7 per pair i <= j. delta_i = 0 marks a monatomic species.
/// `psi` optionally gives power-form exponents per ordered pair (row-major);
/// empty means Psi_ij == 1.
[[nodiscard]] std::vector<PairVerdict> check_mixture(const std::vector<double>& deltas,
                                                     const std::vector<std::vector<double>>& zetas, HypothesisId id,
                                                     const std::vector<std::vector<PsiExponents>>& psi = {});

// ---------------------------------------------------------------------------
// Reference gas parameters
// ---------------------------------------------------------------------------

struct Table1Entry {
  std::string gas;
  double T_min = 0.0;  // K
  double T_max = 0.0;  // K
  double pressure_bar = 0.0;
  double delta = 0.0;
  double zeta = 0.0;
  double zeta_chapman_cowling = 0.0;
};

/// Four gases at 1 bar and 0.092 bar.
[[nodiscard]] const std::vector<Table1Entry>& table1();

struct Table1Row {
  Table1Entry entry;
  Verdict h2;
  Verdict h3;
};

[[nodiscard]] std::vector<Table1Row> table1_report();

}  // namespace polykin
