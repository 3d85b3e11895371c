#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "polykin/hypotheses.hpp"
#include "polykin/operator.hpp"

using namespace polykin;

TEST_CASE("hypothesis names") {
  CHECK(parse_hypothesis("H2") == HypothesisId::H2_single_BL);
  CHECK(parse_hypothesis("H7_mixture_Psi") == HypothesisId::H7_mixture_Psi);
  CHECK_FALSE(parse_hypothesis("H9"));
  CHECK_FALSE(parse_hypothesis("h2"));
  CHECK(hypothesis_name(HypothesisId::H4_resonant) == "H4_resonant");
}

TEST_CASE("nitrogen satisfies H2 but not H3") {
  const auto h2 = check_single(2.017, 0.537, HypothesisId::H2_single_BL);
  CHECK(h2.satisfied);
  CHECK(h2.binding_condition == "delta >= 2");
  const auto h3 = check_single(2.017, 0.537, HypothesisId::H3_single_Psi);
  CHECK_FALSE(h3.satisfied);
  CHECK(h3.binding_condition == "delta > 2.537");
}

TEST_CASE("H3 holds for delta above 2 + zeta") {
  CHECK(check_single(3.0, 0.5, HypothesisId::H3_single_Psi).satisfied);
  CHECK_FALSE(check_single(2.5, 0.5, HypothesisId::H3_single_Psi).satisfied);
}

TEST_CASE("H2 boundary cases") {
  CHECK(check_single(2.0, 0.0, HypothesisId::H2_single_BL).satisfied);
  CHECK_FALSE(check_single(1.94, 0.608, HypothesisId::H2_single_BL).satisfied);
  CHECK_FALSE(check_single(3.0, -1.0, HypothesisId::H2_single_BL).satisfied);
  CHECK_FALSE(check_single(3.0, 2.5, HypothesisId::H2_single_BL).satisfied);
  SingleOptions ext;
  ext.extended_zeta_interval = true;
  const auto v = check_single(3.0, 2.5, HypothesisId::H2_single_BL, ext);
  CHECK(v.satisfied);
  CHECK_FALSE(v.note.empty());
}

TEST_CASE("verdicts are monotone in delta for a unit weight") {
  for (double zeta = -0.9; zeta <= 2.0; zeta += 0.1) {
    bool seen = false;
    for (double delta = 1.0; delta <= 8.0; delta += 0.05) {
      const bool s = check_single(delta, zeta, HypothesisId::H3_single_Psi).satisfied;
      CHECK_FALSE((seen && !s));
      seen = seen || s;
    }
    CHECK(seen);
  }
}

TEST_CASE("satisfied iff every margin holds") {
  for (double delta : {1.5, 2.0, 2.5, 3.0}) {
    for (double zeta : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
      for (auto id : {HypothesisId::H2_single_BL, HypothesisId::H3_single_Psi}) {
        const auto v = check_single(delta, zeta, id);
        bool all = true;
        for (const auto& m : v.margins) all = all && m.holds();
        CHECK(v.satisfied == all);
      }
    }
  }
}

TEST_CASE("custom weights are decided numerically") {
  SingleOptions opts;
  opts.psi = PsiFunction::custom("r(1-r)", [](double r, double) { return r * (1 - r); });
  const auto v = check_single(2.017, 0.537, HypothesisId::H3_single_Psi, opts);
  CHECK(v.satisfied);
  opts.psi = PsiFunction::custom("r", [](double r, double) { return r; });
  CHECK_FALSE(check_single(3.0, 0.5, HypothesisId::H3_single_Psi, opts).satisfied);
}

TEST_CASE("monatomic, resonant and discrete hypotheses") {
  const auto e = check_monatomic(0.5, MonatomicBound::EPower);
  CHECK_FALSE(e.applicable);
  CHECK(check_monatomic(0.5, MonatomicBound::SpeedBound).satisfied);
  CHECK_FALSE(check_monatomic(1.0, MonatomicBound::SpeedBound).satisfied);

  CHECK(check_resonant(3.0, 0.5, 0.2, 1.0).satisfied);
  CHECK_FALSE(check_resonant(3.0, 0.5, 0.5, 1.0).satisfied);
  CHECK_FALSE(check_resonant(3.0, 0.5, 0.2, -3.0).satisfied);

  CHECK(check_discrete(1.0).satisfied);
  CHECK_FALSE(check_discrete(1.2).satisfied);
  CHECK_FALSE(check_discrete(-1.0).satisfied);
}

TEST_CASE("mixture hypotheses per pair") {
  const auto h6 = check_mixture({2.0, 0.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H6_mixture_BL);
  REQUIRE(h6.size() == 3);
  for (const auto& p : h6) CHECK(p.verdict.satisfied);
  CHECK(h6[0].verdict.margins.size() == 3);

  const auto h6bad = check_mixture({1.5, 3.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H6_mixture_BL);
  CHECK_FALSE(h6bad[0].verdict.satisfied);
  CHECK_FALSE(h6bad[1].verdict.satisfied);
  CHECK(h6bad[2].verdict.satisfied);

  const auto h7 = check_mixture({4.0, 4.5}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H7_mixture_Psi);
  for (const auto& p : h7) CHECK(p.verdict.satisfied);
  const auto h7far = check_mixture({3.0, 8.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H7_mixture_Psi);
  CHECK_FALSE(h7far[1].verdict.satisfied);
  const auto h7mono = check_mixture({3.0, 0.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H7_mixture_Psi);
  CHECK_FALSE(h7mono[1].verdict.applicable);

  CHECK_THROWS_AS((void)check_mixture({2.0, 3.0}, {{0.5, 0.4}, {0.5, 0.5}}, HypothesisId::H6_mixture_BL),
                  std::invalid_argument);
}

TEST_CASE("reference gases") {
  const auto rows = table1_report();
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    CHECK(r.h2.satisfied == (r.entry.gas != "H2"));
    CHECK_FALSE(r.h3.satisfied);
  }
}

TEST_CASE("boundary examples for the resonant and mixture hypotheses") {
  CHECK(check_resonant(2.0, 0.0, 0.0, 0.0).satisfied);
  CHECK_FALSE(check_resonant(2.0, 0.0, 0.0, 2.0).satisfied);
  CHECK_FALSE(check_resonant(2.0, 0.0, 0.6, 0.0).satisfied);

  for (const auto& p : check_mixture({2.0, 2.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H6_mixture_BL)) {
    CHECK(p.verdict.satisfied);
  }
  const auto spread = [](const PairVerdict& p) {
    for (const auto& m : p.verdict.margins) {
      if (m.condition.rfind("|delta_", 0) == 0) return m;
    }
    return Margin{};
  };
  const auto near = check_mixture({2.0, 3.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H7_mixture_Psi);
  CHECK(spread(near[1]).holds());
  CHECK(spread(near[1]).slack == doctest::Approx(1.5));
  const auto far = check_mixture({2.0, 5.0}, {{0.5, 0.5}, {0.5, 0.5}}, HypothesisId::H7_mixture_Psi);
  CHECK_FALSE(spread(far[1]).holds());
  CHECK_FALSE(far[1].verdict.satisfied);
}

TEST_CASE("H3 agrees with the analytic exponent verdict") {
  // off-grid points so no boundary is hit exactly (the two forms round differently there)
  for (int i = 0; i < 23; ++i) {
    for (int k = 0; k < 15; ++k) {
      const double delta = 1.61 + 0.2 * i, zeta = -0.83 + 0.2 * k;
      CAPTURE(delta);
      CAPTURE(zeta);
      const bool h3 = check_single(delta, zeta, HypothesisId::H3_single_Psi).satisfied;
      bool analytic = true;
      for (const auto& c : k2_corner_exponents(delta, zeta, PsiExponents{})) analytic = analytic && c.value > -1.0;
      CHECK(h3 == (analytic && delta >= 2.0 && zeta > -1.0));
    }
  }
}
