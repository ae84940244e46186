#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "virblocks/scalars.hpp"

namespace vb {

inline bool is_zero(const BigRational& r) { return r == 0; }

// Rough size of an exact field element, used to pick small pivots.
inline std::size_t pivot_cost(const RatFunc& r) {
  return static_cast<std::size_t>(r.num().degree() + r.den().degree()) + 1;
}
inline std::size_t pivot_cost(const BigRational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

// Dense row-major matrix over an exact field F (RatFunc or BigRational).
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const F& zero = F(0L)) : r_(rows), c_(cols), a_(std::size_t(rows) * cols, zero) {}
  int rows() const { return r_; }
  int cols() const { return c_; }
  F& operator()(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
  const F& operator()(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<F> a_;
};

// In-place reduced row echelon form; returns pivot columns.
template <class F>
std::vector<int> rref(Matrix<F>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int best = -1;
    std::size_t best_cost = 0;
    for (int i = row; i < m.rows(); ++i) {
      if (is_zero(m(i, col))) continue;
      std::size_t c = pivot_cost(m(i, col));
      if (best < 0 || c < best_cost) best = i, best_cost = c;
    }
    if (best < 0) continue;
    if (best != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
    F inv = F(1L) / m(row, col);
    for (int j = col; j < m.cols(); ++j)
      if (!is_zero(m(row, j))) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      F f = m(i, col);
      for (int j = col; j < m.cols(); ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
int rank(Matrix<F> m) {
  return static_cast<int>(rref(m).size());
}

// Basis of {x : m x = 0}, one vector per free column (RREF normalization).
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m) {
  std::vector<int> piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (int p : piv) is_piv[p] = true;
  std::vector<std::vector<F>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    std::vector<F> v(m.cols(), F(0L));
    v[free] = F(1L);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Unique solution of A x = b when A has full column rank and the system is
// consistent; nullopt if inconsistent, throws if A is rank deficient.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& A, const std::vector<F>& b) {
  Matrix<F> aug(A.rows(), A.cols() + 1);
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
    aug(i, A.cols()) = b[i];
  }
  std::vector<int> piv = rref(aug);
  if (!piv.empty() && piv.back() == A.cols()) return std::nullopt;
  if (static_cast<int>(piv.size()) != A.cols()) throw Error(ErrorCode::SingularBasis, "rank-deficient system");
  std::vector<F> x(A.cols(), F(0L));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), A.cols());
  return x;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& A) {
  int n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<F> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n + i) = F(1L);
  }
  std::vector<int> piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
    throw Error(ErrorCode::SingularBasis, "singular matrix");
  Matrix<F> inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

}  // namespace vb
