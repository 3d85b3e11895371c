#include "polykin/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "polykin/operator.hpp"

namespace polykin {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Margin at_least(std::string name, double value, double bound) {
  return {std::move(name) + " >= " + num(bound), value - bound, false};
}
Margin above(std::string name, double value, double bound) {
  return {std::move(name) + " > " + num(bound), value - bound, true};
}
Margin at_most(std::string name, double value, double bound) {
  return {std::move(name) + " <= " + num(bound), bound - value, false};
}
Margin below(std::string name, double value, double bound) {
  return {std::move(name) + " < " + num(bound), bound - value, true};
}

constexpr std::array<std::pair<HypothesisId, std::string_view>, 7> kNames{{
    {HypothesisId::H1_monatomic, "H1_monatomic"},
    {HypothesisId::H2_single_BL, "H2_single_BL"},
    {HypothesisId::H3_single_Psi, "H3_single_Psi"},
    {HypothesisId::H4_resonant, "H4_resonant"},
    {HypothesisId::H5_discrete, "H5_discrete"},
    {HypothesisId::H6_mixture_BL, "H6_mixture_BL"},
    {HypothesisId::H7_mixture_Psi, "H7_mixture_Psi"},
}};

/// Exponent of one factor must exceed -1 for integrability.
Margin exponent_margin(const std::string& label, double exponent) {
  return {"exponent of " + label + " > -1", exponent + 1.0, true};
}

void require_finite(std::initializer_list<double> xs, const char* where) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(where) + ": parameters must be finite");
  }
}

}  // namespace

std::string_view hypothesis_name(HypothesisId id) {
  for (const auto& [k, n] : kNames) {
    if (k == id) return n;
  }
  return "unknown";
}

std::optional<HypothesisId> parse_hypothesis(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
    // short forms H1 ... H7
    if (name.size() == 2 && n.substr(0, 2) == name) return k;
  }
  return std::nullopt;
}

Verdict make_verdict(HypothesisId id, std::vector<Margin> margins) {
  Verdict v;
  v.hypothesis = id;
  v.margins = std::move(margins);
  v.satisfied = std::all_of(v.margins.begin(), v.margins.end(), [](const Margin& m) { return m.holds(); });
  const Margin* binding = nullptr;
  for (const auto& m : v.margins) {
    if (!m.holds()) {
      binding = &m;
      break;
    }
    if (!binding || m.slack < binding->slack) binding = &m;
  }
  if (binding) v.binding_condition = binding->condition;
  return v;
}

Verdict check_single(double delta, double zeta, HypothesisId id, const SingleOptions& opts) {
  require_finite({delta, zeta}, "check_single");
  if (!(delta > 0.0)) throw std::invalid_argument("check_single: delta must be positive");
  std::vector<Margin> m;
  if (id == HypothesisId::H2_single_BL) {
    m.push_back(at_least("delta", delta, 2.0));
    m.push_back(above("zeta", zeta, -1.0));
    m.push_back(at_most("zeta", zeta, opts.extended_zeta_interval ? delta + 1.0 : 2.0));
    auto v = make_verdict(id, std::move(m));
    if (opts.extended_zeta_interval) v.note = "extended zeta interval; physically doubtful above zeta = 2";
    return v;
  }
  if (id != HypothesisId::H3_single_Psi) throw std::invalid_argument("check_single: expects H2 or H3");

  m.push_back(above("zeta", zeta, -1.0));
  m.push_back(at_least("delta", delta, 2.0));
  if (const auto& e = opts.psi.exponents()) {
    // corners of Psi^2 (1-r)^{delta-3-zeta} r^{delta/2-2} R (1-R)^{3delta/2-3-zeta};
    // the mirror r <-> 1-r swaps the two r factors and gives the same conditions
    m.push_back(above("delta", delta, 2.0 - 4.0 * e->r_sym));
    m.push_back(above("delta", delta, 2.0 + zeta - 2.0 * e->r_sym));
    m.push_back(exponent_margin("R", 1.0 + 2.0 * e->R));
    m.push_back(above("delta", delta, (4.0 + 2.0 * zeta - 4.0 * e->one_minus_R) / 3.0));
    return make_verdict(id, std::move(m));
  }
  const bool symmetric = is_symmetric(opts.psi);
  m.push_back({"psi symmetric under r <-> 1-r", symmetric ? 0.0 : -1.0, false});
  if (symmetric) {
    const auto d = k2_integrability_diagnostic(delta, zeta, opts.psi);
    m.push_back({"k2 partial integrals settle (relative change < " + num(kCauchyTolerance) + ")",
                 kCauchyTolerance - d.last_relative_change, true});
  }
  auto v = make_verdict(id, std::move(m));
  v.note = "custom psi decided numerically";
  return v;
}

Verdict check_monatomic(double zeta, MonatomicBound form) {
  require_finite({zeta}, "check_monatomic");
  if (form == MonatomicBound::EPower) {
    Verdict v;
    v.hypothesis = HypothesisId::H1_monatomic;
    v.applicable = false;
    v.satisfied = false;
    v.binding_condition = "not applicable";
    v.note = "the bound is stated in |V|, not in E";
    return v;
  }
  return make_verdict(HypothesisId::H1_monatomic, {above("zeta", zeta, 0.0), below("zeta", zeta, 1.0)});
}

Verdict check_resonant(double delta, double zeta, double zeta1, double zeta2) {
  require_finite({delta, zeta, zeta1, zeta2}, "check_resonant");
  if (!(delta > 0.0)) throw std::invalid_argument("check_resonant: delta must be positive");
  return make_verdict(HypothesisId::H4_resonant,
                      {at_least("zeta", zeta, 0.0), below("zeta", zeta, 1.0), at_least("zeta1", zeta1, 0.0),
                       below("zeta1", zeta1, 0.5), above("zeta2", zeta2, -delta), below("zeta2", zeta2, delta)});
}

Verdict check_discrete(double zeta) {
  require_finite({zeta}, "check_discrete");
  return make_verdict(HypothesisId::H5_discrete, {above("zeta", zeta, -1.0), at_most("zeta", zeta, 1.0)});
}

std::vector<PairVerdict> check_mixture(const std::vector<double>& deltas, const std::vector<std::vector<double>>& zetas,
                                       HypothesisId id, const std::vector<std::vector<PsiExponents>>& psi) {
  const std::size_t n = deltas.size();
  if (n == 0) throw std::invalid_argument("check_mixture: no species");
  if (zetas.size() != n) throw std::invalid_argument("check_mixture: zetas must be " + std::to_string(n) + "x" + std::to_string(n));
  for (const auto& row : zetas) {
    if (row.size() != n) throw std::invalid_argument("check_mixture: zetas must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!psi.empty()) {
    if (psi.size() != n) throw std::invalid_argument("check_mixture: psi exponents must be n x n");
    for (const auto& row : psi) {
      if (row.size() != n) throw std::invalid_argument("check_mixture: psi exponents must be n x n");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i])) throw std::invalid_argument("check_mixture: delta must be >= 0");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(zetas[i][j])) throw std::invalid_argument("check_mixture: zeta must be finite");
      if (zetas[i][j] != zetas[j][i]) throw std::invalid_argument("check_mixture: zetas must be symmetric");
    }
  }
  if (id != HypothesisId::H6_mixture_BL && id != HypothesisId::H7_mixture_Psi) {
    throw std::invalid_argument("check_mixture: expects H6 or H7");
  }

  const auto label = [](const char* what, std::size_t i) { return std::string(what) + "_" + std::to_string(i + 1); };
  std::vector<PairVerdict> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double z = zetas[i][j];
      const std::string zname = "zeta_" + std::to_string(i + 1) + std::to_string(j + 1);
      std::vector<Margin> m;
      if (id == HypothesisId::H6_mixture_BL) {
        if (deltas[i] > 0.0) m.push_back(at_least(label("delta", i), deltas[i], 2.0));
        if (i != j && deltas[j] > 0.0) m.push_back(at_least(label("delta", j), deltas[j], 2.0));
        m.push_back(above(zname, z, 0.0));
        m.push_back(below(zname, z, 1.0));
        out.push_back({i, j, make_verdict(id, std::move(m))});
        continue;
      }

      if (deltas[i] == 0.0 || deltas[j] == 0.0) {
        Verdict v;
        v.hypothesis = id;
        v.applicable = false;
        v.binding_condition = "not applicable";
        v.note = "covers polyatomic species only";
        out.push_back({i, j, v});
        continue;
      }
      m.push_back(above(zname, z, -1.0));
      m.push_back(at_least(label("delta", i), deltas[i], 2.0));
      if (i != j) m.push_back(at_least(label("delta", j), deltas[j], 2.0));
      m.push_back(at_most("|" + label("delta", i) + " - " + label("delta", j) + "|", std::abs(deltas[i] - deltas[j]), 2.0 + z));

      std::vector<std::pair<std::size_t, std::size_t>> orders{{i, j}};
      if (i != j) orders.emplace_back(j, i);
      for (const auto& [p, q] : orders) {
        const PsiExponents e = psi.empty() ? PsiExponents{} : psi[p][q];
        const double dp = deltas[p], dq = deltas[q];
        const std::string tag = " (" + std::to_string(p + 1) + "," + std::to_string(q + 1) + ")";
        // Psi^2 (1-r)^{dq/2-2} r^{(dp+dq)/2-3-z} R (1-R)^{dp/2+dq-3-z}
        m.push_back(exponent_margin("(1-r) in display 1" + tag, dq / 2.0 - 2.0 + 2.0 * e.r_sym));
        m.push_back(exponent_margin("r in display 1" + tag, (dp + dq) / 2.0 - 3.0 - z + 2.0 * e.r_sym));
        // Psi^2 (1-r)^{dq-3-z} r^{dp/2-2} R (1-R)^{dp/2+dq-3-z}
        m.push_back(exponent_margin("(1-r) in display 2" + tag, dq - 3.0 - z + 2.0 * e.r_sym));
        m.push_back(exponent_margin("r in display 2" + tag, dp / 2.0 - 2.0 + 2.0 * e.r_sym));
        m.push_back(exponent_margin("R" + tag, 1.0 + 2.0 * e.R));
        m.push_back(exponent_margin("(1-R)" + tag, dp / 2.0 + dq - 3.0 - z + 2.0 * e.one_minus_R));
      }
      out.push_back({i, j, make_verdict(id, std::move(m))});
    }
  }
  return out;
}

const std::vector<Table1Entry>& table1() {
  static const std::vector<Table1Entry> t{
      {"N2", 300, 600, 1.0, 2.017, 0.537, 0.524},   {"N2", 300, 600, 0.092, 2.007, 0.536, 0.524},
      {"O2", 300, 430, 1.0, 2.080, 0.443, 0.454},   {"O2", 300, 430, 0.092, 2.070, 0.441, 0.454},
      {"CO", 300, 550, 1.0, 2.022, 0.547, 0.532},   {"CO", 300, 550, 0.092, 2.011, 0.524, 0.532},
      {"H2", 300, 890, 1.0, 1.940, 0.608, 0.664},   {"H2", 300, 890, 0.092, 1.939, 0.608, 0.664},
  };
  return t;
}

std::vector<Table1Row> table1_report() {
  std::vector<Table1Row> rows;
  for (const auto& e : table1()) {
    rows.push_back({e, check_single(e.delta, e.zeta, HypothesisId::H2_single_BL),
                    check_single(e.delta, e.zeta, HypothesisId::H3_single_Psi)});
  }
  return rows;
}

}  // namespace polykin
