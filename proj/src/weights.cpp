#include "workbench/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace workbench {

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw std::domain_error("conjugate_exponent: requires p > 1");
  return p / (p - 1.0);
}

ExponentSystem::ExponentSystem(std::vector<double> exponents) : p_i(std::move(exponents)) {
  if (p_i.empty()) throw std::invalid_argument("ExponentSystem: needs at least one exponent");
  double inv = 0.0;
  for (double q : p_i) {
    if (!(q > 1.0) || !std::isfinite(q))
      throw std::invalid_argument("ExponentSystem: exponents must lie in (1, inf)");
    inv += 1.0 / q;
  }
  p = 1.0 / inv;
  p_conj = p > 1.0 ? conjugate_exponent(p) : std::numeric_limits<double>::infinity();
}

double ExponentSystem::conj(int i) const {
  return conjugate_exponent(p_i.at(static_cast<std::size_t>(i)));
}

ExponentSystem ExponentSystem::with_slot_conjugated(int i) const {
  if (!(p > 1.0)) throw std::domain_error("with_slot_conjugated: requires p > 1");
  std::vector<double> q = p_i;
  q.at(static_cast<std::size_t>(i)) = p_conj;
  return ExponentSystem(std::move(q));
}

CellFunction dual_weight(const CellFunction& w, double p_i) {
  if (!(p_i > 1.0)) throw std::domain_error("dual_weight: p_i = 1 endpoint unsupported");
  if (!(w.min_value() > 0.0)) throw std::domain_error("dual_weight: weight must be positive");
  return w.cellwise_pow(1.0 - conjugate_exponent(p_i));
}

WeightVector::WeightVector(std::vector<CellFunction> w, ExponentSystem exps)
    : w_(std::move(w)), exps_(std::move(exps)) {
  if (w_.empty() || static_cast<int>(w_.size()) != exps_.m())
    throw std::invalid_argument("WeightVector: weight count must match exponent count");
  for (std::size_t i = 1; i < w_.size(); ++i)
    if (!(w_[i].config() == w_[0].config()))
      throw std::invalid_argument("WeightVector: config mismatch between weights");
  sigma_.reserve(w_.size());
  for (int i = 0; i < exps_.m(); ++i)
    sigma_.push_back(dual_weight(w_[static_cast<std::size_t>(i)], exps_.p_i[static_cast<std::size_t>(i)]));
  v_ = w_[0].cellwise_pow(exps_.p / exps_.p_i[0]);
  for (int i = 1; i < exps_.m(); ++i)
    v_ = v_.cellwise_times(
        w_[static_cast<std::size_t>(i)].cellwise_pow(exps_.p / exps_.p_i[static_cast<std::size_t>(i)]));
}

CellFunction combined_weight(const WeightVector& wv) { return wv.v(); }

CellFunction power_weight_cells(const ModelConfig& cfg, double a) {
  if (cfg.n != 1) throw std::invalid_argument("power_weight_cells: n = 1 only");
  if (!(a > -1.0)) throw std::domain_error("power_weight_cells: requires a > -1");
  const std::int64_t N = cfg.cells_per_axis();
  std::vector<double> vals(static_cast<std::size_t>(N));
  const double Nd = static_cast<double>(N);
  for (std::int64_t i = 0; i < N; ++i) {
    // Average of x^a over [i/N, (i+1)/N): N * (v^(a+1) - u^(a+1)) / (a+1).
    const double u = static_cast<double>(i) / Nd;
    const double v = static_cast<double>(i + 1) / Nd;
    vals[static_cast<std::size_t>(i)] =
        Nd * (std::pow(v, a + 1.0) - std::pow(u, a + 1.0)) / (a + 1.0);
  }
  return CellFunction(cfg, std::move(vals));
}

}  // namespace workbench
