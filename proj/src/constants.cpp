#include "workbench/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace workbench {

double apq_per_cube(const WeightVector& wv, const Cube& q) {
  std::vector<CellFunction> sigma;
  sigma.reserve(static_cast<std::size_t>(wv.m()));
  for (int i = 0; i < wv.m(); ++i) sigma.push_back(wv.sigma(i));
  return apq_per_cube_parts(wv.v(), sigma, wv.exponents(), q);
}

double apq_per_cube_parts(const CellFunction& v, const std::vector<CellFunction>& sigma,
                          const ExponentSystem& e, const Cube& q) {
  const double meas = measure(v.config(), q);
  double out = cube_integral(v, q) / meas;
  for (int i = 0; i < e.m(); ++i) {
    out *= std::pow(cube_integral(sigma[static_cast<std::size_t>(i)], q) / meas,
                    e.p / e.conj(i));
  }
  return out;
}

namespace {

struct SupScan {
  double best = -1.0;
  Cube arg;
  std::int64_t count = 0;

  void offer(double value, const Cube& q) {
    ++count;
    if (value > best) {  // ties keep the lexicographically first cube
      best = value;
      arg = q;
    }
  }

  ConstantReport report() const { return ConstantReport{best, arg, count}; }
};

}  // namespace

ConstantReport multilinear_ap_constant(const WeightVector& wv) {
  return multilinear_ap_constant(wv, all_grids(wv.config()));
}

ConstantReport multilinear_ap_constant(const WeightVector& wv, const std::vector<GridId>& grids) {
  std::vector<CellFunction> sigma;
  sigma.reserve(static_cast<std::size_t>(wv.m()));
  for (int i = 0; i < wv.m(); ++i) sigma.push_back(wv.sigma(i));
  return multilinear_ap_constant_parts(wv.v(), sigma, wv.exponents(), grids);
}

ConstantReport multilinear_ap_constant_parts(const CellFunction& v,
                                             const std::vector<CellFunction>& sigma,
                                             const ExponentSystem& e,
                                             const std::vector<GridId>& grids,
                                             bool segment_only) {
  const ModelConfig& cfg = v.config();
  SupScan scan;
  for (const GridId& g : grids) {
    for (int k = 0; k <= cfg.L; ++k) {
      const std::vector<double> iv = level_integrals(v, g, k);
      std::vector<std::vector<double>> is;
      is.reserve(sigma.size());
      for (int i = 0; i < e.m(); ++i)
        is.push_back(level_integrals(sigma[static_cast<std::size_t>(i)], g, k));
      const double meas = std::ldexp(1.0, -k * cfg.n);
      for (const Cube& q : cubes_at_level(cfg, g, k)) {
        if (segment_only && cube_wraps(cfg, q)) continue;
        const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, q));
        double val = iv[li] / meas;
        for (int i = 0; i < e.m(); ++i)
          val *= std::pow(is[static_cast<std::size_t>(i)][li] / meas, e.p / e.conj(i));
        scan.offer(val, q);
      }
    }
  }
  return scan.report();
}

ConstantReport multilinear_ap_constant(const WeightVector& wv, const std::vector<Cube>& family) {
  SupScan scan;
  for (const Cube& q : family) scan.offer(apq_per_cube(wv, q), q);
  return scan.report();
}

namespace {

// Post-order walk of one grid's cube tree. buf accumulates, per cell, the
// maximum of avg_R(w) over the chain of cubes R with cell in R and R inside
// the current subtree top; integrals of w are summed bottom-up.
struct AinftyScan {
  const CellFunction& w;
  const ModelConfig cfg;
  std::vector<double> buf;
  std::vector<std::pair<Cube, double>> ratios;  // (cube, per-cube quantity)
  double top_integral_of_max = 0.0;

  explicit AinftyScan(const CellFunction& w_)
      : w(w_), cfg(w_.config()), buf(static_cast<std::size_t>(cfg.cell_count()), 0.0) {}

  double walk(const Cube& q) {
    double wq;
    const double meas = measure(cfg, q);
    if (q.level == cfg.L) {
      wq = cube_integral(w, q);
      const double a = wq / meas;
      for_each_cell(cfg, q, [&](std::int64_t c) { buf[static_cast<std::size_t>(c)] = a; });
    } else {
      wq = 0.0;
      for (const Cube& c : children(cfg, q)) wq += walk(c);
      const double a = wq / meas;
      for_each_cell(cfg, q, [&](std::int64_t c) {
        double& b = buf[static_cast<std::size_t>(c)];
        if (a > b) b = a;
      });
    }
    double intmax = 0.0;
    for_each_cell(cfg, q, [&](std::int64_t c) { intmax += buf[static_cast<std::size_t>(c)]; });
    intmax *= cfg.cell_volume();
    top_integral_of_max = intmax;
    ratios.emplace_back(q, intmax / wq);
    return wq;
  }
};

}  // namespace

ConstantReport ainfty_constant(const CellFunction& w, GridId grid, bool segment_only) {
  if (!(w.min_value() > 0.0)) throw std::domain_error("ainfty_constant: weight must be positive");
  AinftyScan scan(w);
  scan.walk(root_cube(grid));
  std::sort(scan.ratios.begin(), scan.ratios.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SupScan sup;
  for (const auto& [q, r] : scan.ratios) {
    if (segment_only && cube_wraps(w.config(), q)) continue;
    sup.offer(r, q);
  }
  return sup.report();
}

ConstantReport ainfty_constant_all_grids(const CellFunction& w, bool segment_only) {
  SupScan sup;
  for (const GridId& g : all_grids(w.config())) {
    const ConstantReport r = ainfty_constant(w, g, segment_only);
    if (r.family_size == 0) continue;
    sup.offer(r.value, r.argmax);
    sup.count += r.family_size - 1;
  }
  return sup.report();
}

double localized_maximal_integral(const CellFunction& w, const Cube& S) {
  if (!(w.min_value() > 0.0))
    throw std::domain_error("localized_maximal_integral: weight must be positive");
  AinftyScan scan(w);
  scan.walk(S);
  return scan.top_integral_of_max;
}

WeightVector transform_vector(const WeightVector& wv, int i) {
  if (i < 0 || i >= wv.m()) throw std::out_of_range("transform_vector: index out of range");
  const ExponentSystem& e = wv.exponents();
  if (!(e.p > 1.0)) throw std::domain_error("transform_vector: requires p > 1");
  std::vector<CellFunction> w;
  w.reserve(static_cast<std::size_t>(wv.m()));
  for (int j = 0; j < wv.m(); ++j) {
    if (j == i)
      w.push_back(wv.v().cellwise_pow(1.0 - e.p_conj));
    else
      w.push_back(wv.weight(j));
  }
  return WeightVector(std::move(w), e.with_slot_conjugated(i));
}

}  // namespace workbench
