#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "virblocks/assoc.hpp"
#include "virblocks/series.hpp"

using namespace vb;

namespace {
const double k0 = Tolerances::default_kappa;
}

TEST_CASE("regime A expansion") {
  auto s = expand_regime_A<RatFunc>({1, 1, 1, 1}, 0, 6);
  CHECK(s.delta[0] == RatFunc(-2) * h_weight(1));
  CHECK(s.delta[1].is_zero());
  CHECK(s.coeff({0, 0}) == RatFunc(1));
  CHECK(s.prefactor.size() == 2);
  auto d = expand_regime_A<RatFunc>({1, 1, 0, 2}, 2, 6);
  CHECK(d.coeffs.size() == 1);
  CHECK_THROWS_AS(expand_regime_A<RatFunc>({1, 1, 1, 1}, 1, 6), Error);
}

TEST_CASE("degenerate λ_2 = 0: single powers agree to rounding") {
  AssocOptions opt;
  opt.adaptive = false;
  for (int s : {0, 2}) {
    auto r = assoc_check({1, 1, 0, s}, s, 0.8, 1.0, k0, 4, opt);
    CHECK(r.K_A == 4);
    CHECK(r.rel_diff < 1e-13);
    CHECK(r.verdict);
  }
}

TEST_CASE("associativity for labels (1,1,1,1)") {
  for (int s : {0, 2}) {
    auto r = assoc_check({1, 1, 1, 1}, s, 0.8, 1.0, k0, 24);
    CAPTURE(s);
    CHECK(r.verdict);
    CHECK(r.rel_diff <= 1e-8);
    CHECK(r.sixj_values.size() == 2);
    CHECK(r.K_B == 24);
    CHECK(r.K_A >= 24);
    // another generic κ₀
    CHECK(assoc_check({1, 1, 1, 1}, s, 0.8, 1.0, 2.718281828459045, 24).verdict);
  }
}

TEST_CASE("fixed truncation is reported as used") {
  AssocOptions opt;
  opt.adaptive = false;
  auto r = assoc_check({1, 1, 1, 1}, 0, 0.8, 1.0, k0, 24, opt);
  CHECK(r.K_A == 24);
  CHECK(r.tail_A > 0);
  // ratio 0.8 needs more than 24 orders for 1e-8
  CHECK_FALSE(r.verdict);
}

TEST_CASE("corrupted 6j flips the verdict") {
  AssocOptions opt;
  opt.sixj_override[0] = Cplx(1, 0);
  auto r = assoc_check({1, 1, 1, 1}, 2, 0.8, 1.0, k0, 24, opt);
  CHECK_FALSE(r.verdict);
  CHECK(r.sixj_values[0] == Cplx(1, 0));
}

TEST_CASE("domain and selection errors") {
  CHECK_THROWS_AS(assoc_check({1, 1, 1, 1}, 0, 0.4, 1.0, k0, 8), Error);
  CHECK_THROWS_AS(assoc_check({1, 1, 1, 1}, 0, 1.0, 0.8, k0, 8), Error);
  CHECK_THROWS_AS(assoc_check({1, 1, 1, 1}, 1, 0.8, 1.0, k0, 8), Error);
}

TEST_CASE("descendant associativity") {
  AssocOptions opt;
  opt.tol = Tolerances::descendant_tol;
  auto plain = assoc_check({1, 1, 1, 1}, 0, 0.8, 1.0, k0, 24, opt);
  auto none = descendant_assoc_check({1, 1, 1, 1}, 0, {}, 0.8, 1.0, k0, 24, opt);
  CHECK(plain.value_A == none.value_A);
  CHECK(plain.value_B == none.value_B);
  CHECK(descendant_assoc_check({1, 1, 1, 1}, 0, {{0, {1}}}, 0.8, 1.0, k0, 24, opt).verdict);
  CHECK(descendant_assoc_check({1, 1, 1, 1}, 2, {{3, {2}}}, 0.8, 1.0, k0, 24, opt).verdict);
  CHECK(descendant_assoc_check({1, 1, 1, 1}, 2, {{1, {1}}, {2, {1}}}, 0.8, 1.0, k0, 24, opt).verdict);
  CHECK_THROWS(descendant_assoc_check({1, 1, 1, 1}, 0, {{0, {1, 1, 1}}}, 0.8, 1.0, k0, 24, opt));
}

TEST_CASE("case enumeration") {
  auto cases = assoc_cases(1);
  for (const auto& [lab, s] : cases) {
    CHECK(fusion_allowed(lab[0], lab[1], s));
    CHECK(fusion_allowed(s, lab[2], lab[3]));
  }
  CHECK(cases.size() == 9);
}
