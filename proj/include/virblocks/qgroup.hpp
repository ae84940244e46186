#pragma once

#include <map>
#include <vector>

#include "virblocks/scalars.hpp"

namespace vb {

// Labels of a tensor product M_{λ_N} ⊗ … ⊗ M_{λ_1}, written left to right,
// so shape.back() is the factor with the smallest index.
using TensorShape = std::vector<int>;
using MultiIndex = std::vector<int>;

// Sparse vector in a tensor product of U_q(sl2) irreps with Q(q) entries.
// Keys are multi-indices (j_N, …, j_1) aligned with the shape.
struct QGVector {
  TensorShape shape;
  std::map<MultiIndex, RatFunc> entries;

  QGVector() = default;
  explicit QGVector(TensorShape s) : shape(std::move(s)) {}
  static QGVector basis(TensorShape s, MultiIndex idx);

  void add(const MultiIndex& idx, const RatFunc& c);
  bool is_zero() const { return entries.empty(); }
  RatFunc coeff(const MultiIndex& idx) const;

  QGVector& operator+=(const QGVector& o);
  QGVector& operator-=(const QGVector& o);
  QGVector& operator*=(const RatFunc& s);
  friend QGVector operator+(QGVector a, const QGVector& b) { return a += b; }
  friend QGVector operator-(QGVector a, const QGVector& b) { return a -= b; }
  friend QGVector operator*(const RatFunc& s, QGVector v) { return v *= s; }
  friend bool operator==(const QGVector& a, const QGVector& b) {
    return a.shape == b.shape && a.entries == b.entries;
  }
};

int weight_of(const TensorShape& shape, const MultiIndex& idx);  // Σ (λ_i − 2 j_i)
std::vector<MultiIndex> weight_basis(const TensorShape& shape, int weight);  // lexicographic

enum class Gen { E, F, K, Kinv };
QGVector act_generator(Gen g, const QGVector& v);

std::vector<int> selection_set(int mu, int lambda);
bool in_selection_set(int sigma, int mu, int lambda);

// Linear map between tensor products, stored by the images of source basis
// vectors (lexicographic source multi-indices).
struct LinearMap {
  TensorShape src, dst;
  std::map<MultiIndex, QGVector> columns;

  QGVector apply(const QGVector& v) const;
};

LinearMap compose(const LinearMap& outer, const LinearMap& inner);
LinearMap identity_map(const TensorShape& shape);
// id ⊗ f ⊗ id where f acts on the factors starting at position pos (left to right).
QGVector apply_on_factors(const LinearMap& f, std::size_t pos, const QGVector& v);

// Clebsch–Gordan embedding M_σ → M_λ ⊗ M_μ (column 0 explicit, column j = F^j column 0).
const LinearMap& cg_embed(int sigma, int lambda, int mu);
// Module map M_λ ⊗ M_μ → M_σ with π̄∘ι = id, solved weight space by weight space.
const LinearMap& cg_project(int lambda, int mu, int sigma);
// Canonical projector ι∘π̄ on M_λ ⊗ M_μ.
LinearMap cg_projector(int lambda, int mu, int sigma);

// Basis of Ker(E) ∩ Ker(K − q^σ), exact null space over Q(q).
std::vector<QGVector> highest_weight_space(const TensorShape& shape, int sigma);
// Rank of E restricted to the weight-σ space, computed at an exact rational
// specialization of q (an upper bound for the generic null-space dimension).
int highest_weight_dim_at(const TensorShape& shape, int sigma, const BigRational& q0);

// lambdas = (λ_0, …, λ_N, λ_∞), sigmas = (ς_0, …, ς_N).
bool is_admissible(const std::vector<int>& lambdas, const std::vector<int>& sigmas);
std::vector<std::vector<int>> admissible_sequences(const std::vector<int>& lambdas);
QGVector conformal_block_vector(const std::vector<int>& lambdas, const std::vector<int>& sigmas);
// Projection conditions of the conformal block vector; true if all hold.
bool check_projection_conditions(const std::vector<int>& lambdas, const std::vector<int>& sigmas,
                                 const QGVector& u);

// Quantum 6j symbol: coefficient of (ι_{ν,λ3,λ2}⊗id)∘ι_{σ,ν,λ1} in the expansion
// of (id⊗ι_{κ,λ2,λ1})∘ι_{σ,λ3,κ}.
RatFunc sixj(int sigma, int l3, int l2, int l1, int kidx, int nu);

struct SixJEntry {
  int kidx, nu;
  RatFunc value;
};
// All entries for fixed (σ, λ3, λ2, λ1), sorted by (κ, ν).
std::vector<SixJEntry> sixj_table(int sigma, int l3, int l2, int l1);

// Checks the defining expansion on every basis vector of M_σ, exactly.
bool verify_sixj_identity(int sigma, int l3, int l2, int l1);

}  // namespace vb
