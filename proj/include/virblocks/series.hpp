#pragma once

#include <vector>

#include "virblocks/config.hpp"
#include "virblocks/frobenius.hpp"
#include "virblocks/virasoro.hpp"

namespace vb {

// Conformal weights h(λ_0), …, h(λ_N).
std::vector<RatFunc> weights_of(const std::vector<int>& labels);

// Translation-reduced Witt operator for slot j (1 ≤ j ≤ N) with x_0 = 0:
//   (−x_j)^n (−x_j Σ_i ∂_i − (1+n) h_0) − Σ_{i≠j} (x_i − x_j)^n ((x_i − x_j) ∂_i + (1+n) h_i),
// binomials expanded in the ratio of the smaller to the larger variable.
// h = (h_0, …, h_N); the operator acts on N-variable series.
template <class S>
SeriesOperator<S> witt_reduced(int j, int n, const std::vector<RatFunc>& h, double kappa0 = Tolerances::default_kappa);

// Σ_compositions coef · L_{−p_1}∘⋯∘L_{−p_k} with the singular-vector
// coefficients of label λ and L_{−p} supplied by the caller.
template <class S, class F>
SeriesOperator<S> bsa_operator(int lambda, F&& L_minus, double kappa0) {
  std::vector<SeriesOperator<S>> cache(lambda + 2);
  std::vector<bool> have(lambda + 2, false);
  SeriesOperator<S> out = SeriesOperator<S>::zero();
  for (const auto& t : bsa_terms(lambda)) {
    SeriesOperator<S> word = SeriesOperator<S>::identity();
    for (int p : t.parts) {
      if (!have[p]) {
        cache[p] = L_minus(p);
        have[p] = true;
      }
      word = word * cache[p];
    }
    out = out + word.scaled(lift<S>(t.coef, kappa0));
  }
  return out;
}

// The BSA operator of slot j: order λ_j + 1. labels = (λ_0, …, λ_N).
template <class S>
SeriesOperator<S> bsa_reduced(int j, const std::vector<int>& labels, double kappa0 = Tolerances::default_kappa);

// Operator at infinity: the BSA sum of label λ_∞ over the positive modes
// Σ_{i=1..N} (x_i^{p+1} ∂_i + (p+1) h_i x_i^p). labels = (λ_0, …, λ_N).
template <class S>
SeriesOperator<S> bsa_infinity_operator(const std::vector<int>& labels, int lambda_inf,
                                        double kappa0 = Tolerances::default_kappa);

// Two-variable operators in (y, x) = (x_2 − x_1, x_1), variable order y < x:
//   (−x−y)^n ((−x−y) ∂_x − (1+n) h_0) − (−y)^n ((−y)(∂_x − ∂_y) + (1+n) h_1).
template <class S>
SeriesOperator<S> witt_hatted(int n, const RatFunc& h0, const RatFunc& h1, double kappa0 = Tolerances::default_kappa);
// BSA sum of label λ_2 over the operators above. labels = (λ_0, λ_1, λ_2).
template <class S>
SeriesOperator<S> bsa_hatted(const std::vector<int>& labels, double kappa0 = Tolerances::default_kappa);

// Indicial recursion: given the slice of offset 0 in the first variable,
// solves op·C = 0 slice by slice, c(a) = −R(a − drop·ε_1) / denom(a_1).
template <class S, class Denom>
FrobeniusSeries<S> peel_solve(const SeriesOperator<S>& op, const FrobeniusSeries<S>& slice0, int drop, Denom&& denom);

// Normalized highest-weight matrix element of the composition of N
// intertwiners. lambdas = (λ_0, …, λ_N, λ_∞), sigmas = (ς_0, …, ς_N).
// Prefactor ∏_j β(λ_j, ς_{j−1}, ς_j).
template <class S>
FrobeniusSeries<S> compose_blocks(const std::vector<int>& lambdas, const std::vector<int>& sigmas, int K,
                                  double kappa0 = Tolerances::default_kappa);

// Two-variable series in (y, x) with exponents (Δ̂(μ), Δ̂'(μ)); labels = (λ_0, λ_1, λ_2, λ_∞).
// Prefactor β(λ_2, λ_1, μ)·β(μ, λ_0, λ_∞).
template <class S>
FrobeniusSeries<S> expand_regime_B(const std::vector<int>& labels, int mu, int K,
                                   double kappa0 = Tolerances::default_kappa);

// True when every coefficient of op·s through the supported order vanishes.
template <class S>
bool annihilates(const SeriesOperator<S>& op, const FrobeniusSeries<S>& s);
// Largest |coefficient| of op·s (numeric residual).
template <class S>
double residual_norm(const SeriesOperator<S>& op, const FrobeniusSeries<S>& s, double kappa0);

// ---------------------------------------------------------------- template bodies

template <class S, class Denom>
FrobeniusSeries<S> peel_solve(const SeriesOperator<S>& op, const FrobeniusSeries<S>& slice0, int drop, Denom&& denom) {
  const int n = slice0.nvars;
  const int K = slice0.trunc;
  FrobeniusSeries<S> result = slice0;
  if (n < 2) return result;
  FrobeniusSeries<S> residual = apply_operator(op, slice0);
  for (int k = 1; k <= K; ++k) {
    FrobeniusSeries<S> slice = slice0.zero_like();
    slice.coeffs.clear();
    S den = denom(k);
    // offsets (k, a_2, …, a_{N−1}) with Σ ≤ K
    std::vector<int> a(n - 1, 0);
    a[0] = k;
    while (true) {
      Shift e = shift_of(a);
      Shift t = e;
      t[0] -= drop;
      S r = residual.coeff(t);
      if (!is_zero(r)) slice.add(e, -r / den);
      // next offset vector in lexicographic order with bounded sum
      int m = n - 2;
      int sum = 0;
      for (int v : a) sum += v;
      while (m >= 1) {
        if (sum < K) {
          ++a[m];
          break;
        }
        sum -= a[m];
        a[m] = 0;
        --m;
      }
      if (m < 1) break;
    }
    if (slice.coeffs.empty()) continue;
    for (const auto& [e, c] : slice.coeffs) result.add(e, c);
    if (k < K) {
      FrobeniusSeries<S> img = apply_operator(op, slice);
      residual.trunc = std::min(residual.trunc, img.trunc);
      for (const auto& [e, c] : img.coeffs) residual.add(e, c);
    }
  }
  return result;
}

}  // namespace vb
