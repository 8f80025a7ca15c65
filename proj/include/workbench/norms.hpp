#pragma once

#include "workbench/dyadic.hpp"

// Weighted Lebesgue and weak-Lebesgue functionals on cell functions. Both are
// exact for step functions: the strong norm is a fixed-order cell sum, the
// weak quasi-norm scans the attained values of |g| instead of sampling a
// threshold grid.

namespace workbench {

// (sum_cells g^p w * cellvol)^(1/p), cells in natural order.
double lp_norm(const CellFunction& g, const CellFunction& w, double p);

// sup_{alpha>0} alpha * w({g > alpha})^(1/p). For a step function the sup is
// max over attained values t of t * w({g >= t})^(1/p).
double weak_lp_norm(const CellFunction& g, const CellFunction& w, double p);

}  // namespace workbench
