#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "virblocks/scalars.hpp"

namespace vb {

// Weakly decreasing positive parts (n_k ≥ … ≥ n_1); names the PBW vector
// L_{−n_k}⋯L_{−n_1}v. Empty = highest weight vector.
using Partition = std::vector<int>;
int degree(const Partition& p);
std::vector<Partition> partitions_of(int d);  // lexicographically increasing
long partition_count(int d);                  // p(d), 0 for d < 0

RatFunc central_charge();           // 13 − 6(κ/4 + 4/κ)
RatFunc h_weight(int lambda);       // λ(2(λ+2) − κ)/(2κ)
RatFunc h_weight(const RatFunc& mu);  // same formula for a symbolic / rational label

// Vector of a Verma module V(c, h), or of the first-row quotient Q_λ when
// first_row >= 0 (then h = h_λ and entries are canonical representatives).
struct VermaVector {
  RatFunc h;
  int first_row = -1;
  std::map<Partition, RatFunc> entries;

  static VermaVector highest(const RatFunc& h, int first_row = -1);
  static VermaVector basis(const RatFunc& h, const Partition& p, int first_row = -1);
  VermaVector zero_like() const;

  void add(const Partition& p, const RatFunc& c);
  bool is_zero() const { return entries.empty(); }
  RatFunc coeff(const Partition& p) const;
  int max_length() const;  // longest PBW word present (0 for the highest weight vector)

  VermaVector& operator+=(const VermaVector& o);
  VermaVector& operator-=(const VermaVector& o);
  VermaVector& operator*=(const RatFunc& s);
  friend VermaVector operator+(VermaVector a, const VermaVector& b) { return a += b; }
  friend VermaVector operator-(VermaVector a, const VermaVector& b) { return a -= b; }
  friend VermaVector operator*(const RatFunc& s, VermaVector v) { return v *= s; }
  friend bool operator==(const VermaVector& a, const VermaVector& b) { return a.entries == b.entries; }
};

// L_n · v, PBW-straightened. In a first-row module the result is reduced.
VermaVector act_L(int n, const VermaVector& v);

// Compositions (p_1,…,p_k) of λ+1, lexicographic, with the BSA coefficient
// (−4/κ)^{λ+1−k}(λ!)² / ∏_{u<k} (Σ_{i≤u} p_i)(Σ_{i>u} p_i).
struct BsaTerm {
  std::vector<int> parts;
  RatFunc coef;
};
std::vector<BsaTerm> bsa_terms(int lambda);

// Σ coef · L_{−p_1}⋯L_{−p_k} v in V(c, h_λ), straightened.
VermaVector singular_vector(int lambda);

// Canonical representative in Q_λ (echelon reduction against the degree
// slices of the submodule generated by S_λ v). Idempotent.
VermaVector quotient_reduce(const VermaVector& v);
// dim Q_λ at degree d (partitions of d that are not echelon pivots).
int first_row_dimension(int lambda, int d);

// ⟨L_{−π} v', X⟩ = coefficient of the highest weight vector in L_{n_1}⋯L_{n_k} X.
RatFunc hw_pairing(const Partition& wprime, const VermaVector& X);

// Polynomial in two variables with Q(κ) coefficients; key (i, j) ↦ coefficient of a^i b^j.
struct BiPoly {
  std::map<std::pair<int, int>, RatFunc> c;

  static BiPoly constant(const RatFunc& r);
  static BiPoly var_a();
  static BiPoly var_b();
  bool is_zero() const { return c.empty(); }
  int degree_a() const;
  int degree_b() const;
  RatFunc coeff(int i, int j) const;
  void add(int i, int j, const RatFunc& v);

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const RatFunc& s, const BiPoly& b);
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c == b.c; }

  RatFunc eval(const RatFunc& a, const RatFunc& b) const;
  // a ↦ f (f itself a BiPoly in (a, b)); b kept.
  BiPoly substitute_a(const BiPoly& f) const;
};

// P_λ(h_in, h_out) with a = h_in, b = h_out.
struct SelectionPoly {
  int lambda;
  BiPoly poly;
};
SelectionPoly selection_polynomial(int lambda);
// ∏_{ℓ=0}^{λ} (h_out − h(λ+μ−2ℓ)) as a BiPoly in (μ, h_out).
BiPoly selection_product(int lambda);
// h(μ) as a BiPoly in (μ, ·).
BiPoly h_weight_poly();

bool fusion_allowed(int lambda, int mu, int nu);
std::vector<int> fusion_channels(int lambda, int mu);

// Γ(a + b/κ)
struct GammaArg {
  BigRational a, b;
  Cplx eval(double kappa0) const;
  std::string str() const;
};

// β(λ_mid, λ_in, λ_out) = r · ∏ Γ(num) / ∏ Γ(den).
struct BetaCoef {
  BigRational rational_factor = 1;
  std::vector<GammaArg> num, den;
  Cplx eval(double kappa0) const;  // throws GammaPole
  std::vector<std::string> factor_strings() const;
};
BetaCoef beta_coef(int l_mid, int l_in, int l_out);

}  // namespace vb
