#include "workbench/dyadic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace workbench {

ModelConfig::ModelConfig(int n_, int L_) : n(n_), L(L_) {
  if (n != 1 && n != 2) throw std::invalid_argument("ModelConfig: n must be 1 or 2");
  if (L < 1 || L > 12) throw std::invalid_argument("ModelConfig: L must be in [1,12]");
}

std::int64_t ModelConfig::cell_count() const {
  const std::int64_t N = cells_per_axis();
  return n == 1 ? N : N * N;
}

double ModelConfig::cell_volume() const { return 1.0 / static_cast<double>(cell_count()); }

std::vector<GridId> all_grids(const ModelConfig& cfg) {
  std::vector<GridId> out;
  if (cfg.n == 1) {
    for (int s = 0; s < 3; ++s) out.push_back(GridId{{s, 0}});
  } else {
    for (int s0 = 0; s0 < 3; ++s0)
      for (int s1 = 0; s1 < 3; ++s1) out.push_back(GridId{{s0, s1}});
  }
  return out;
}

Cube root_cube(GridId grid) { return Cube{grid, 0, {0, 0}}; }

std::vector<Cube> cubes_at_level(const ModelConfig& cfg, GridId grid, int k) {
  if (k < 0 || k > cfg.L) throw std::out_of_range("cubes_at_level: level out of range");
  const std::int64_t m = std::int64_t{1} << k;
  std::vector<Cube> out;
  if (cfg.n == 1) {
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < m; ++j) out.push_back(Cube{grid, k, {j, 0}});
  } else {
    out.reserve(static_cast<std::size_t>(m * m));
    for (std::int64_t j0 = 0; j0 < m; ++j0)
      for (std::int64_t j1 = 0; j1 < m; ++j1) out.push_back(Cube{grid, k, {j0, j1}});
  }
  return out;
}

std::vector<Cube> children(const ModelConfig& cfg, const Cube& q) {
  if (q.level >= cfg.L) throw std::out_of_range("children: cube at maximal depth");
  std::vector<Cube> out;
  if (cfg.n == 1) {
    for (std::int64_t t = 0; t < 2; ++t)
      out.push_back(Cube{q.grid, q.level + 1, {2 * q.index[0] + t, 0}});
  } else {
    for (std::int64_t t0 = 0; t0 < 2; ++t0)
      for (std::int64_t t1 = 0; t1 < 2; ++t1)
        out.push_back(Cube{q.grid, q.level + 1, {2 * q.index[0] + t0, 2 * q.index[1] + t1}});
  }
  return out;
}

Cube parent(const Cube& q) {
  if (q.level == 0) throw std::out_of_range("parent: root cube has no parent");
  return Cube{q.grid, q.level - 1, {q.index[0] / 2, q.index[1] / 2}};
}

Cube ancestor_at(const Cube& q, int level) {
  if (level < 0 || level > q.level) throw std::out_of_range("ancestor_at: bad level");
  const int d = q.level - level;
  return Cube{q.grid, level, {q.index[0] >> d, q.index[1] >> d}};
}

bool contains(const Cube& outer, const Cube& inner) {
  if (outer.grid != inner.grid || inner.level < outer.level) return false;
  return ancestor_at(inner, outer.level) == outer;
}

Cube cube_containing_cell(const ModelConfig& cfg, GridId grid, int k,
                          std::int64_t cell_linear_index) {
  if (k < 0 || k > cfg.L) throw std::out_of_range("cube_containing_cell: level out of range");
  const std::int64_t N = cfg.cells_per_axis();
  const std::int64_t side = std::int64_t{3} << (cfg.L - k);
  auto axis_index = [&](std::int64_t c, int axis) {
    const std::int64_t off = static_cast<std::int64_t>(grid.shift[axis]) << cfg.L;
    return (((c - off) % N + N) % N) / side;
  };
  if (cfg.n == 1) return Cube{grid, k, {axis_index(cell_linear_index, 0), 0}};
  return Cube{grid, k, {axis_index(cell_linear_index / N, 0), axis_index(cell_linear_index % N, 1)}};
}

bool cube_wraps(const ModelConfig& cfg, const Cube& q) {
  const std::int64_t N = cfg.cells_per_axis();
  const std::int64_t side = cube_side_cells(cfg, q);
  for (int a = 0; a < cfg.n; ++a)
    if (cube_start_cell(cfg, q, a) % N + side > N) return true;
  return false;
}

double measure(const ModelConfig& cfg, const Cube& q) {
  return std::ldexp(1.0, -q.level * cfg.n);
}

std::int64_t cube_side_cells(const ModelConfig& cfg, const Cube& q) {
  return std::int64_t{3} << (cfg.L - q.level);
}

std::int64_t cube_cell_count(const ModelConfig& cfg, const Cube& q) {
  const std::int64_t s = cube_side_cells(cfg, q);
  return cfg.n == 1 ? s : s * s;
}

std::int64_t cube_start_cell(const ModelConfig& cfg, const Cube& q, int axis) {
  return q.index[axis] * cube_side_cells(cfg, q) +
         (static_cast<std::int64_t>(q.grid.shift[axis]) << cfg.L);
}

CellFunction::CellFunction(const ModelConfig& cfg, double value)
    : cfg_(cfg), values_(static_cast<std::size_t>(cfg.cell_count()), value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::domain_error("CellFunction: values must be non-negative and finite");
}

CellFunction::CellFunction(const ModelConfig& cfg, std::vector<double> values)
    : cfg_(cfg), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != cfg.cell_count())
    throw std::invalid_argument("CellFunction: wrong number of cell values");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::domain_error("CellFunction: values must be non-negative and finite");
}

CellFunction CellFunction::indicator(const ModelConfig& cfg, const Cube& q) {
  CellFunction f(cfg, 0.0);
  for_each_cell(cfg, q, [&](std::int64_t c) { f[c] = 1.0; });
  return f;
}

double CellFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * cfg_.cell_volume();
}

double CellFunction::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

double CellFunction::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

CellFunction CellFunction::cellwise_pow(double e) const {
  CellFunction out = *this;
  for (double& v : out.values_) v = std::pow(v, e);
  return out;
}

CellFunction CellFunction::cellwise_times(const CellFunction& g) const {
  if (!(cfg_ == g.cfg_)) throw std::invalid_argument("cellwise_times: config mismatch");
  CellFunction out = *this;
  for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] *= g.values_[i];
  return out;
}

CellFunction CellFunction::scaled(double c) const {
  CellFunction out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

CellFunction CellFunction::clamped_min(double floor) const {
  CellFunction out = *this;
  for (double& v : out.values_) v = std::max(v, floor);
  return out;
}

CellFunction CellFunction::masked(const Cube& q) const {
  CellFunction out(cfg_, 0.0);
  for_each_cell(cfg_, q, [&](std::int64_t c) { out[c] = (*this)[c]; });
  return out;
}

double cube_integral(const CellFunction& f, const Cube& q) {
  const ModelConfig& cfg = f.config();
  if (q.level > cfg.L) throw std::invalid_argument("cube_integral: config mismatch");
  double s = 0.0;
  for_each_cell(cfg, q, [&](std::int64_t c) { s += f[c]; });
  return s * cfg.cell_volume();
}

double cube_average(const CellFunction& f, const Cube& q) {
  return cube_integral(f, q) / measure(f.config(), q);
}

std::int64_t cube_linear_index(const ModelConfig& cfg, const Cube& q) {
  if (cfg.n == 1) return q.index[0];
  return q.index[0] * (std::int64_t{1} << q.level) + q.index[1];
}

std::vector<double> level_integrals(const CellFunction& f, GridId grid, int k) {
  const ModelConfig& cfg = f.config();
  const std::int64_t m = std::int64_t{1} << k;
  const std::int64_t count = cfg.n == 1 ? m : m * m;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (const Cube& q : cubes_at_level(cfg, grid, k)) {
    out[static_cast<std::size_t>(cube_linear_index(cfg, q))] = cube_integral(f, q);
  }
  return out;
}

}  // namespace workbench
