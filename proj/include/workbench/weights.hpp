#pragma once

#include <vector>

#include "workbench/dyadic.hpp"

// Weight vectors and their derived objects: the dual weights sigma_i =
// w_i^(1-p_i') and the product weight v = prod_i w_i^(p/p_i), plus the
// exponent bookkeeping around (p_1,...,p_m).

namespace workbench {

constexpr double kDefaultWeightFloor = 1e-12;

double conjugate_exponent(double p);  // p' = p/(p-1), requires p > 1

struct ExponentSystem {
  std::vector<double> p_i;  // each in (1, inf)
  double p = 0.0;           // 1/p = sum_i 1/p_i
  double p_conj = 0.0;      // p' (finite only when p > 1)

  ExponentSystem() = default;
  explicit ExponentSystem(std::vector<double> exponents);

  int m() const { return static_cast<int>(p_i.size()); }
  double conj(int i) const;  // p_i'
  // Exponent system with slot i replaced by p'.
  ExponentSystem with_slot_conjugated(int i) const;
};

class WeightVector {
 public:
  // Weights must be strictly positive cellwise; builders apply a floor clamp.
  WeightVector(std::vector<CellFunction> w, ExponentSystem exps);

  const ExponentSystem& exponents() const { return exps_; }
  int m() const { return exps_.m(); }
  const CellFunction& weight(int i) const { return w_.at(static_cast<std::size_t>(i)); }
  const CellFunction& sigma(int i) const { return sigma_.at(static_cast<std::size_t>(i)); }
  const CellFunction& v() const { return v_; }
  const ModelConfig& config() const { return w_.front().config(); }

 private:
  std::vector<CellFunction> w_;
  std::vector<CellFunction> sigma_;
  CellFunction v_;
  ExponentSystem exps_;
};

// sigma = w^(1-p'), cellwise. Requires w > 0 cellwise and p > 1.
CellFunction dual_weight(const CellFunction& w, double p_i);

// v = prod_i w_i^(p/p_i), cellwise.
CellFunction combined_weight(const WeightVector& wv);

// Cell values are the exact averages of x^a over each cell, n=1 only, with
// distance measured from 0 on [0,1) treated as a line segment (no wrap).
// Requires a > -1 so the averages are finite.
CellFunction power_weight_cells(const ModelConfig& cfg, double a);

}  // namespace workbench
