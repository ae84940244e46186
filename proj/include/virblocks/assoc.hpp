#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "virblocks/config.hpp"
#include "virblocks/frobenius.hpp"
#include "virblocks/virasoro.hpp"

namespace vb {

// Regime A: ⟨w', Y(w_2, x_2) Y(w_1, x_1) w_0⟩ through the channel ς.
// labels = (λ_0, λ_1, λ_2, λ_∞).
template <class S>
FrobeniusSeries<S> expand_regime_A(const std::vector<int>& labels, int sigma, int K,
                                   double kappa0 = Tolerances::default_kappa);

// Descendant insertion: slot 0 = w_0 (ket), 1 = w_1, 2 = w_2, 3 = w' (bra).
struct Insertion {
  int slot = 0;
  Partition word;
};

struct AssocOptions {
  double tol = Tolerances::assoc_tol;
  // Grow each regime's truncation from the requested K until the last orders
  // contribute less than tol/10 of the value. Off: use K exactly.
  bool adaptive = true;
  int max_trunc = 400;
  // Replace 6j values (negative controls).
  std::map<int, Cplx> sixj_override;
};

struct AssocReport {
  std::vector<int> labels;  // (λ_0, λ_1, λ_2, λ_∞)
  int sigma = 0;
  std::vector<Insertion> insertions;
  double x1 = 0, x2 = 0;
  double kappa0 = 0;
  int K_requested = 0;
  int K_A = 0, K_B = 0;
  Cplx value_A, value_B;
  double tail_A = 0, tail_B = 0;  // heuristic: magnitude of the last included orders
  double abs_diff = 0, rel_diff = 0;
  std::map<int, Cplx> sixj_values;    // μ ↦ 6j(q₀)
  std::map<int, Cplx> branch_values;  // μ ↦ regime-B value of the μ branch
  double tol = 0;
  bool verdict = false;
};

AssocReport assoc_check(const std::vector<int>& labels, int sigma, double x1, double x2, double kappa0, int K,
                        const AssocOptions& opt = {});

// Same comparison with PBW descendants inserted (total length ≤ 2), both
// sides rewritten by matrix_element_reduce before evaluation.
AssocReport descendant_assoc_check(const std::vector<int>& labels, int sigma, const std::vector<Insertion>& insertions,
                                   double x1, double x2, double kappa0, int K, const AssocOptions& opt = {});

// All (λ_0, λ_1, λ_2, λ_∞, ς) with labels ≤ max_label that admit a block.
std::vector<std::pair<std::vector<int>, int>> assoc_cases(int max_label);

}  // namespace vb
