#include "workbench/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace workbench {

double lp_norm(const CellFunction& g, const CellFunction& w, double p) {
  if (!(g.config() == w.config())) throw std::invalid_argument("lp_norm: config mismatch");
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  const std::int64_t n = g.size();
  for (std::int64_t i = 0; i < n; ++i) s += std::pow(g[i], p) * w[i];
  return std::pow(s * g.config().cell_volume(), 1.0 / p);
}

double weak_lp_norm(const CellFunction& g, const CellFunction& w, double p) {
  if (!(g.config() == w.config())) throw std::invalid_argument("weak_lp_norm: config mismatch");
  if (!(p >= 1.0)) throw std::invalid_argument("weak_lp_norm: p must be >= 1");
  const std::int64_t n = g.size();
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::int64_t{0});
  // Descending by value, index-ascending among ties, so the prefix masses are
  // accumulated in a fixed order.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return g[a] > g[b]; });
  const double vol = g.config().cell_volume();
  double mass = 0.0;
  double best = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = g[order[i]];
    if (t <= 0.0) break;
    // Add the w-mass of every cell with value exactly t; then w({g >= t}).
    while (i < order.size() && g[order[i]] == t) {
      mass += w[order[i]] * vol;
      ++i;
    }
    best = std::max(best, t * std::pow(mass, 1.0 / p));
  }
  return best;
}

}  // namespace workbench
