#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "virblocks/qgroup.hpp"
#include "virblocks/series.hpp"

using namespace vb;

namespace {

using Op = SeriesOperator<RatFunc>;
using Series = FrobeniusSeries<RatFunc>;
const double k0 = Tolerances::default_kappa;

RatFunc k() { return RatFunc::kappa(); }

Series monomial(std::vector<RatFunc> delta, Shift e, int trunc) {
  Series s(std::move(delta), trunc);
  s.add(e, RatFunc(1));
  return s;
}

}  // namespace

TEST_CASE("offset and shift coordinates") {
  CHECK(order_of({2, -1, -1}) == 3);
  CHECK(offsets_of({2, -1, -1}) == std::vector<int>{2, 1});
  CHECK(shift_of({2, 1}) == Shift{2, -1, -1});
  CHECK(shift_of({}) == Shift{0});
}

TEST_CASE("primitive operators") {
  RatFunc d = k() / RatFunc(3);
  Series s = monomial({RatFunc(1), d}, {0, 0}, 4);
  CHECK(apply_operator(Op::identity(), s).coeffs == s.coeffs);
  Series ds = apply_operator(Op::deriv(1), s);
  CHECK(ds.coeff({0, -1}) == d);
  CHECK(ds.trunc == 4);  // ∂ of the largest variable keeps the order
  Series d1 = apply_operator(Op::deriv(0), s);
  CHECK(d1.trunc == 3);
  // (x_2 − x_1)^{-1} = x_2^{-1} Σ (x_1/x_2)^k
  Series b = apply_operator(Op::binom(1, 0, 1, -1, -1), s);
  CHECK(b.trunc == 4);
  for (int kk = 0; kk <= 4; ++kk) CHECK(b.coeff({kk, -1 - kk}) == RatFunc(1));
  CHECK(b.coeffs.size() == 5);
  // (−x_2 + x_1)^2 is a polynomial: three terms
  Series p = apply_operator(Op::binom(1, 0, -1, 1, 2), s);
  CHECK(p.coeff({0, 2}) == RatFunc(1));
  CHECK(p.coeff({1, 1}) == RatFunc(-2));
  CHECK(p.coeff({2, 0}) == RatFunc(1));
  CHECK_THROWS_AS(apply_operator(Op::deriv(0), s, 4), Error);
}

TEST_CASE("Witt operator leading part on one variable") {
  // N = 1: L_{-1} x^Δ = (−x)^{-1}(−x d/dx) x^Δ = Δ x^{Δ−1}
  std::vector<RatFunc> h{RatFunc(BigRational(1, 3)), RatFunc(BigRational(2, 5))};
  RatFunc delta = k();
  Series s = monomial({delta}, {0}, 0);
  Series r = apply_operator(witt_reduced<RatFunc>(1, -1, h), s);
  CHECK(r.coeff({-1}) == delta);
  // with all weights zero, L_{-1} is the translation generator: zero on constants
  Series c = monomial({RatFunc(0), RatFunc(0)}, {0, 0}, 3);
  CHECK(apply_operator(witt_reduced<RatFunc>(2, -1, {RatFunc(0), RatFunc(0), RatFunc(0)}), c).coeffs.empty());
}

TEST_CASE("one-variable BSA operator gives the selection polynomial") {
  for (int lam = 0; lam <= 3; ++lam)
    for (int lin : {0, 1, 2})
      for (int sig : fusion_channels(lam, lin)) {
        std::vector<int> labels{lin, lam};
        RatFunc delta = h_weight(sig) - h_weight(lam) - h_weight(lin);
        for (int n = 0; n <= 2; ++n) {
          Series r = apply_operator(bsa_reduced<RatFunc>(1, labels), monomial({delta}, {n}, 0));
          RatFunc expect = selection_polynomial(lam).poly.eval(h_weight(lin), h_weight(sig) + RatFunc(n));
          CHECK(r.coeff({n - lam - 1}) == expect);
          if (n == 0) CHECK(expect.is_zero());
          if (n > 0) CHECK_FALSE(expect.is_zero());
        }
      }
}

TEST_CASE("compose_blocks base cases") {
  Series s = compose_blocks<RatFunc>({1, 1, 0}, {1, 0}, 5);
  CHECK(s.coeffs.size() == 1);
  CHECK(s.coeff({0}) == RatFunc(1));
  CHECK(s.delta[0] == RatFunc(-2) * h_weight(1));
  REQUIRE(s.prefactor.size() == 1);
  // λ_2 = 0: the first-order equation in x_2 forces constancy
  Series t = compose_blocks<RatFunc>({1, 1, 0, 2}, {1, 2, 2}, 8);
  CHECK(t.coeffs.size() == 1);
  CHECK(t.coeff({0, 0}) == RatFunc(1));
  CHECK_THROWS_AS(compose_blocks<RatFunc>({1, 1, 1, 1}, {1, 1, 1}, 4), Error);
}

TEST_CASE("annihilation by every BSA operator and at infinity, N ≤ 3") {
  std::vector<std::vector<int>> shapes{{1, 1, 1, 1}, {2, 1, 1, 2}, {1, 2, 1, 0}, {1, 1, 1, 1, 1}, {2, 1, 2, 1, 2}};
  for (const auto& lambdas : shapes)
    for (const auto& sig : admissible_sequences(lambdas)) {
      CAPTURE(lambdas);
      CAPTURE(sig);
      Series s = compose_blocks<RatFunc>(lambdas, sig, 8);
      CHECK(s.coeff(Shift(lambdas.size() - 2, 0)) == RatFunc(1));
      std::vector<int> labels(lambdas.begin(), lambdas.end() - 1);
      for (int j = 1; j + 1 < static_cast<int>(lambdas.size()); ++j) {
        Series r = apply_operator(bsa_reduced<RatFunc>(j, labels), s);
        CHECK(r.trunc >= 0);
        CHECK(r.coeffs.empty());
      }
      Series r = apply_operator(bsa_infinity_operator<RatFunc>(labels, lambdas.back()), s);
      CHECK(r.trunc == 8);
      CHECK(r.coeffs.empty());
      // a label at infinity that is not reachable leaves a residual
      CHECK_FALSE(apply_operator(bsa_infinity_operator<RatFunc>(labels, lambdas.back() + 1), s).coeffs.empty());
    }
}

TEST_CASE("peeled operator lowers the order by λ_1 + 1 in the peeled variable") {
  Series s = compose_blocks<RatFunc>({1, 2, 1, 2}, {1, 1, 2}, 6);
  Series r = apply_operator(bsa_reduced<RatFunc>(1, {1, 2, 1}), s);
  CHECK(r.trunc == 6 - 3);
}

TEST_CASE("perturbing one coefficient breaks annihilation") {
  Series s = compose_blocks<RatFunc>({1, 1, 1, 1}, {1, 2, 1}, 6);
  std::vector<int> labels{1, 1, 1};
  for (const auto& [e, c] : s.coeffs) {
    Series bad = s;
    bad.coeffs[e] = c + RatFunc(1);
    bool broken = false;
    for (int j = 1; j <= 2; ++j) broken |= !apply_operator(bsa_reduced<RatFunc>(j, labels), bad).coeffs.empty();
    CHECK(broken);
  }
}

TEST_CASE("regime B series") {
  Series b = expand_regime_B<RatFunc>({1, 1, 1, 1}, 0, 8);
  CHECK(b.coeff({0, 0}) == RatFunc(1));
  CHECK(b.delta[0] == RatFunc(-2) * h_weight(1));
  CHECK(b.delta[1] == RatFunc(0));
  CHECK(b.prefactor.size() == 2);
  for (const auto& [e, c] : b.coeffs) CHECK(e[0] + e[1] == 0);
  CHECK(apply_operator(bsa_hatted<RatFunc>({1, 1, 1}), b).coeffs.empty());
  // λ_2 = 0 degenerates to one term
  Series d = expand_regime_B<RatFunc>({1, 2, 0, 1}, 2, 8);
  CHECK(d.coeffs.size() == 1);
  CHECK_THROWS_AS(expand_regime_B<RatFunc>({1, 1, 1, 1}, 1, 4), Error);
}

TEST_CASE("numeric instantiation agrees with the exact series") {
  Series s = compose_blocks<RatFunc>({1, 2, 1, 2}, {1, 1, 2}, 8);
  FrobeniusSeries<double> d = compose_blocks<double>({1, 2, 1, 2}, {1, 1, 2}, 8, k0);
  FrobeniusSeries<double> n = to_numeric(s, k0);
  REQUIRE(d.coeffs.size() == n.coeffs.size());
  for (const auto& [e, c] : n.coeffs) CHECK(d.coeff(e) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("evaluation") {
  FrobeniusSeries<double> one({0.0}, 0);
  one.add({0}, 1.0);
  CHECK(std::abs(eval_series(one, k0, {3.0}).value - 1.0) < 1e-15);
  Series s = compose_blocks<RatFunc>({1, 1, 0}, {1, 0}, 0);
  Cplx v = eval_series(s, 2.637, {2.0}).value;
  double delta = (RatFunc(-2) * h_weight(1)).eval(Cplx(2.637, 0)).real();
  Cplx expect = beta_coef(1, 1, 0).eval(2.637) * std::pow(2.0, delta);
  CHECK(std::abs(v - expect) < 1e-12 * std::abs(expect));
  CHECK_THROWS_AS(eval_series(one, k0, {-1.0}), Error);
  // two truncations agree in the regime x_1/x_2 = 0.4 (0.4^16 ≈ 4e-7 is too
  // coarse for 1e-8, so compare 24 against 32)
  auto a = eval_series(compose_blocks<double>({1, 1, 1, 1}, {1, 0, 1}, 24, k0), k0, {0.4, 1.0});
  auto b = eval_series(compose_blocks<double>({1, 1, 1, 1}, {1, 0, 1}, 32, k0), k0, {0.4, 1.0});
  CHECK(std::abs(a.value - b.value) <= 1e-8 * std::abs(b.value));
}
