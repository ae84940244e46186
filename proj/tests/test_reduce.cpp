#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "virblocks/reduce.hpp"
#include "virblocks/series.hpp"

using namespace vb;

namespace {

using Op = SeriesOperator<RatFunc>;
using Series = FrobeniusSeries<RatFunc>;

bool same(const Series& a, const Series& b) {
  if (a.trunc != b.trunc) return false;
  return a.coeffs == b.coeffs;
}

std::vector<RatFunc> weights_A(const std::vector<int>& labels) { return weights_of(labels); }

}  // namespace

TEST_CASE("all-empty insertions reduce to the identity") {
  auto w = weights_of({1, 1, 1, 1});
  Op op = matrix_element_reduce(make_spec(w, {}, {{}, {}}, {}), chain_geometry<RatFunc>(2));
  Series s = compose_blocks<RatFunc>({1, 1, 1, 1}, {1, 0, 1}, 6);
  CHECK(same(apply_operator(op, s), s));
}

TEST_CASE("N = 1 first-order insertions") {
  // h_in, h_mid, h_out generic rationals; x^Δ with Δ = h_out − h_mid − h_in
  RatFunc hin(BigRational(2, 7)), hmid(BigRational(5, 3)), hout(BigRational(-1, 4));
  RatFunc delta = hout - hmid - hin;
  std::vector<RatFunc> w{hin, hmid, hout};
  Series mono({delta}, 0);
  mono.add({0}, RatFunc(1));
  auto geom = chain_geometry<RatFunc>(1);
  // Y(L_{-1} w, x) = d/dx
  Series mid = apply_operator(matrix_element_reduce(make_spec(w, {}, {{1}}, {}), geom), mono);
  CHECK(mid.coeff({-1}) == delta);
  CHECK(mid.coeffs.size() == 1);
  // <v', Y L_{-1} v0> = -d/dx
  Series ket = apply_operator(matrix_element_reduce(make_spec(w, {}, {{}}, {1}), geom), mono);
  CHECK(ket.coeff({-1}) == -delta);
  // <L'_{-1} v', Y v0> = <v', L_1 Y v0> = (x^2 d/dx + 2 h_mid x) x^Δ
  Series bra = apply_operator(matrix_element_reduce(make_spec(w, {1}, {{}}, {}), geom), mono);
  CHECK(bra.coeff({1}) == delta + RatFunc(2) * hmid);
}

TEST_CASE("singular-vector insertion reproduces the selection polynomial") {
  // N = 1, S_λ in the middle slot: the reduction gives c·x^{Δ−λ−1} with c a
  // polynomial of degree ≤ λ+1 in each of (h_in, h_out); agreement with P_λ on
  // a (λ+2)×(λ+2) grid of rational weights is therefore an exact identity.
  auto geom = chain_geometry<RatFunc>(1);
  for (int lam = 0; lam <= 3; ++lam) {
    const BiPoly P = selection_polynomial(lam).poly;
    const VermaVector S = singular_vector(lam);
    for (int a = 0; a < lam + 2; ++a)
      for (int b = 0; b < lam + 2; ++b) {
        RatFunc hin(BigRational(2 * a + 1, 3)), hout(BigRational(3 * b - 2, 5));
        RatFunc delta = hout - S.h - hin;
        MatrixElementSpec spec;
        spec.ket = VermaVector::highest(hin);
        spec.mids = {S};
        spec.bra = VermaVector::highest(hout);
        Series mono({delta}, 0);
        mono.add({0}, RatFunc(1));
        Series r = apply_operator(matrix_element_reduce(spec, geom), mono);
        RatFunc expect = P.eval(hin, hout);
        CHECK(r.coeff({-lam - 1}) == expect);
        CHECK(r.coeffs.size() == (expect.is_zero() ? 0u : 1u));
      }
  }
}

TEST_CASE("L_{-1} insertion is a derivative in both geometries") {
  std::vector<int> labels{1, 1, 1, 1};
  auto w = weights_A(labels);
  Series A = compose_blocks<RatFunc>(labels, {1, 2, 1}, 8);
  auto chain = chain_geometry<RatFunc>(2);
  for (int j = 1; j <= 2; ++j) {
    std::vector<Partition> mids{{}, {}};
    mids[j - 1] = {1};
    Series lhs = apply_operator(matrix_element_reduce(make_spec(w, {}, mids, {}), chain), A);
    Series rhs = apply_operator(Op::deriv(j - 1), A);
    rhs.trunc = lhs.trunc;
    rhs.prune();
    CHECK(same(lhs, rhs));
  }
  Series B = expand_regime_B<RatFunc>(labels, 2, 8);
  auto fused = fused_geometry<RatFunc>();
  Series l1 = apply_operator(matrix_element_reduce(make_spec(w, {}, {{1}, {}}, {}), fused), B);
  Series r1 = apply_operator(Op::deriv(1) - Op::deriv(0), B);
  r1.trunc = l1.trunc;
  r1.prune();
  CHECK(same(l1, r1));
  Series l2 = apply_operator(matrix_element_reduce(make_spec(w, {}, {{}, {1}}, {}), fused), B);
  Series r2 = apply_operator(Op::deriv(0), B);
  r2.trunc = l2.trunc;
  r2.prune();
  CHECK(same(l2, r2));
}

TEST_CASE("singular vectors in any slot annihilate the highest-weight blocks") {
  std::vector<int> labels{1, 1, 1, 1};
  auto w = weights_A(labels);
  auto chain = chain_geometry<RatFunc>(2);
  auto fused = fused_geometry<RatFunc>();
  for (int sigma : {0, 2}) {
    Series A = compose_blocks<RatFunc>(labels, {1, sigma, 1}, 10);
    Series B = expand_regime_B<RatFunc>(labels, sigma, 10);
    for (int slot = 0; slot < 4; ++slot) {
      CAPTURE(sigma);
      CAPTURE(slot);
      MatrixElementSpec spec = make_spec(w, {}, {{}, {}}, {});
      VermaVector S = singular_vector(1);
      if (slot == 0) spec.ket = S;
      if (slot == 1) spec.mids[0] = S;
      if (slot == 2) spec.mids[1] = S;
      if (slot == 3) spec.bra = S;
      Series ra = apply_operator(matrix_element_reduce(spec, chain), A);
      CHECK(ra.trunc >= 4);
      CHECK(ra.coeffs.empty());
      Series rb = apply_operator(matrix_element_reduce(spec, fused), B);
      CHECK(rb.trunc >= 4);
      CHECK(rb.coeffs.empty());
      // negative control: a non-singular degree-2 vector does not annihilate
      spec = make_spec(w, {}, {{}, {}}, {});
      VermaVector bad = S + VermaVector::basis(S.h, {2});
      if (slot == 0) spec.ket = bad;
      if (slot == 1) spec.mids[0] = bad;
      if (slot == 2) spec.mids[1] = bad;
      if (slot == 3) spec.bra = bad;
      CHECK_FALSE(apply_operator(matrix_element_reduce(spec, chain), A).coeffs.empty());
    }
  }
}
