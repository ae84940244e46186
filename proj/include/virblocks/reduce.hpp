#pragma once

#include <functional>
#include <vector>

#include "virblocks/config.hpp"
#include "virblocks/frobenius.hpp"
#include "virblocks/virasoro.hpp"

namespace vb {

// Matrix element ⟨w', Y(w_N, p_N) ⋯ Y(w_1, p_1) w_0⟩ with descendant
// insertions. The bra lives in the contragredient of the module at infinity,
// modeled as a Verma module whose PBW word L_{−π} v' pairs through
// hw_pairing. Slot vectors carry their own weights.
struct MatrixElementSpec {
  VermaVector bra;
  std::vector<VermaVector> mids;  // w_1, …, w_N
  VermaVector ket;
};

// weights = (h_0, …, h_N, h_∞); bra / mids / ket given as single PBW words.
MatrixElementSpec make_spec(const std::vector<RatFunc>& weights, const Partition& bra,
                            const std::vector<Partition>& mids, const Partition& ket);

// Positions p_1, …, p_N of the inserted fields in terms of the series
// variables (p_0 = 0): powers (p_i − p_j)^m expanded in the convergent
// regime, and ∂/∂p_i.
template <class S>
struct ReductionGeometry {
  int npoints = 0;
  std::function<SeriesOperator<S>(int, int, int)> power;  // (i, j, m) ↦ (p_i − p_j)^m
  std::function<SeriesOperator<S>(int)> deriv;            // i ↦ ∂/∂p_i
};

// p_i = x_i, variables x_1 < … < x_N.
template <class S>
ReductionGeometry<S> chain_geometry(int npoints);
// p_1 = x, p_2 = x + y, variables (y, x) with y < x.
template <class S>
ReductionGeometry<S> fused_geometry();

// Rewrites the matrix element as an operator acting on the highest-weight
// matrix element: each step removes the leftmost mode of one insertion by
// contour deformation, so the total PBW length strictly decreases.
template <class S>
SeriesOperator<S> matrix_element_reduce(const MatrixElementSpec& spec, const ReductionGeometry<S>& geom,
                                        double kappa0 = Tolerances::default_kappa);

}  // namespace vb
