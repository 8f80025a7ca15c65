#pragma once

#include <vector>

#include "workbench/weights.hpp"

// Estimators for the weight constants: the multilinear Muckenhoupt constant
// over a finite cube family, the Fujii-Wilson A_infty constant with the
// grid-matched dyadic maximal function inside the integral, and the
// weight-vector transform that conjugates one slot.
//
// Every supremum is an exact finite-family maximum. Ties are broken by the
// (grid, level, index) lexicographic order of the cubes, so the reported
// argmax is deterministic.

namespace workbench {

struct ConstantReport {
  double value = 0.0;
  Cube argmax;
  std::int64_t family_size = 0;
};

// The quantity inside the sup: avg_Q(v) * prod_i avg_Q(sigma_i)^(p/p_i').
double apq_per_cube(const WeightVector& wv, const Cube& q);
// Same quantity from explicitly given product and dual weights (used when
// those are carried as exact cell averages of their own closed forms rather
// than cellwise powers of w_i).
double apq_per_cube_parts(const CellFunction& v, const std::vector<CellFunction>& sigma,
                          const ExponentSystem& e, const Cube& q);

// Sup of apq_per_cube over all levels of the given grids (default: all 3^n
// shifted grids). For m = 1 this is the classical A_p constant.
ConstantReport multilinear_ap_constant(const WeightVector& wv);
ConstantReport multilinear_ap_constant(const WeightVector& wv, const std::vector<GridId>& grids);
ConstantReport multilinear_ap_constant(const WeightVector& wv, const std::vector<Cube>& family);
// When segment_only is set, the supremum skips cubes that wrap around the
// torus seam: runs whose weights treat [0,1) as a line segment take their
// suprema over genuine sub-intervals only.
ConstantReport multilinear_ap_constant_parts(const CellFunction& v,
                                             const std::vector<CellFunction>& sigma,
                                             const ExponentSystem& e,
                                             const std::vector<GridId>& grids,
                                             bool segment_only = false);

// Fujii-Wilson constant over one grid:
//   sup_Q (1/w(Q)) * int_Q M_D(w 1_Q)
// where M_D is the dyadic maximal function of the same grid. Always >= 1.
ConstantReport ainfty_constant(const CellFunction& w, GridId grid, bool segment_only = false);
// Max of the per-grid constants over all 3^n grids.
ConstantReport ainfty_constant_all_grids(const CellFunction& w, bool segment_only = false);

// int_S M_D(w 1_S) over the same-grid cube S (the Carleson majorant).
double localized_maximal_integral(const CellFunction& w, const Cube& S);

// Replaces slot i by v^(1-p') and exponent p_i by p'.
WeightVector transform_vector(const WeightVector& wv, int i);

}  // namespace workbench
