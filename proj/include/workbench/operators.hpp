#pragma once

#include <vector>

#include "workbench/sparse.hpp"

// Computable operators of the model: the multilinear dyadic maximal function,
// its multi-grid envelope, the positive sparse operator, the dyadic level-set
// decomposition of the sparse operator, and a certified lower-bound evaluator
// for the rough kernel used by the power-weight example.

namespace workbench {

// Per cell, max over same-grid cubes containing the cell of prod_i avg_Q(g_i).
CellFunction dyadic_maximal(const std::vector<CellFunction>& g, GridId grid);

// Cellwise max of dyadic_maximal over the 3^n shifted grids.
CellFunction multi_grid_maximal(const std::vector<CellFunction>& g);

// sum over family cubes of (prod_i avg_Q(g_i)) * chi_Q. Terms are added in
// stage-major, lexicographic-per-stage order.
CellFunction sparse_operator(const SparseFamily& fam, const std::vector<CellFunction>& g);

// Per family cube, prod_i avg_Q(g_i), in all_cubes() order.
std::vector<double> sparse_coefficients(const SparseFamily& fam,
                                        const std::vector<CellFunction>& g);

struct LevelSetStage {
  int l = 0;                          // threshold 2^l
  std::vector<std::uint8_t> omega;    // cells of {A > 2^l}
  std::vector<Cube> maximal_cubes;    // pairwise disjoint, maximal in omega
  // E_l(Q) = Q cap Omega_{l+1} \ Omega_{l+2}, one mask per maximal cube.
  std::vector<std::vector<std::uint8_t>> e_sets;
};

struct LevelSetDecomposition {
  CellFunction a;                  // the sparse operator output
  std::vector<LevelSetStage> stages;  // attained l, ascending
};

// Thresholds 2^l over the attained bands of A = sparse_operator(fam, g);
// values equal to a threshold fall outside the level set (strict >). The
// localization inequality A(g 1_Q)(x) > 2^l on every E_l(Q) is re-verified;
// a failure indicates a construction bug and throws.
LevelSetDecomposition level_set_decomposition(const SparseFamily& fam,
                                              const std::vector<CellFunction>& g);

// Graded tensor quadrature for the bilinear kernel
//   K(x, y1, y2) = (2x - y1 - y2) / ((x-y1)^2 + (x-y2)^2)^(3/2)
// applied to f_i(y) = y^(eps-1) on (0,1], evaluated at x > 1 where the kernel
// is strictly positive and non-singular. Panels are dyadic toward 0 with
// uniform subdivision; on each panel the kernel is bounded below through its
// monotone parts (numerator at the upper corner, denominator at the lower),
// and the f-mass uses the closed-form power integral, so the result is a
// certified lower estimate of the true integral.
struct RieszMesh {
  int geo_levels = 22;  // dyadic levels [2^-(k+1), 2^-k], k = 0..geo_levels-2
  int subdiv = 3;       // uniform subdivision of each level
  // panels per axis = (geo_levels - 1) * subdiv + 1 residual; default 64
};

double riesz_like_apply(double eps, double x, const RieszMesh& mesh = RieszMesh{});

// Certified lower estimate of (int_{1<x<=2} R1(f)(x)^p v(x) dx)^(1/p) with
// v(x) = x^a; the x-integral is panelled and the kernel bounds hold uniformly
// on each x-panel.
double riesz_lower_functional(double eps, double p, double v_exponent, int x_panels = 32,
                              const RieszMesh& mesh = RieszMesh{});

}  // namespace workbench
