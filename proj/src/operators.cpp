#include "workbench/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace workbench {

namespace {

void check_inputs(const std::vector<CellFunction>& g) {
  if (g.empty()) throw std::invalid_argument("operator input: no functions");
  for (const CellFunction& f : g)
    if (!(f.config() == g.front().config()))
      throw std::invalid_argument("operator input: config mismatch");
}

}  // namespace

CellFunction dyadic_maximal(const std::vector<CellFunction>& g, GridId grid) {
  check_inputs(g);
  const ModelConfig& cfg = g.front().config();
  CellFunction out(cfg, 0.0);
  for (int k = 0; k <= cfg.L; ++k) {
    std::vector<std::vector<double>> ints;
    ints.reserve(g.size());
    for (const CellFunction& f : g) ints.push_back(level_integrals(f, grid, k));
    const double meas = std::ldexp(1.0, -k * cfg.n);
    for (const Cube& q : cubes_at_level(cfg, grid, k)) {
      const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, q));
      double val = 1.0;
      for (const auto& iv : ints) val *= iv[li] / meas;
      for_each_cell(cfg, q, [&](std::int64_t c) {
        if (val > out[c]) out[c] = val;
      });
    }
  }
  return out;
}

CellFunction multi_grid_maximal(const std::vector<CellFunction>& g) {
  check_inputs(g);
  const ModelConfig& cfg = g.front().config();
  CellFunction out(cfg, 0.0);
  for (const GridId& grid : all_grids(cfg)) {
    const CellFunction m = dyadic_maximal(g, grid);
    for (std::int64_t c = 0; c < out.size(); ++c) out[c] = std::max(out[c], m[c]);
  }
  return out;
}

std::vector<double> sparse_coefficients(const SparseFamily& fam,
                                        const std::vector<CellFunction>& g) {
  check_inputs(g);
  std::vector<double> coeffs;
  for (const auto& stage : fam.stages) {
    for (const Cube& q : stage) {
      double val = 1.0;
      for (const CellFunction& f : g) val *= cube_average(f, q);
      coeffs.push_back(val);
    }
  }
  return coeffs;
}

CellFunction sparse_operator(const SparseFamily& fam, const std::vector<CellFunction>& g) {
  check_inputs(g);
  const ModelConfig& cfg = g.front().config();
  CellFunction out(cfg, 0.0);
  std::size_t idx = 0;
  const std::vector<double> coeffs = sparse_coefficients(fam, g);
  for (const auto& stage : fam.stages) {
    for (const Cube& q : stage) {
      const double val = coeffs[idx++];
      for_each_cell(cfg, q, [&](std::int64_t c) { out[c] += val; });
    }
  }
  return out;
}

namespace {

// Band index l with value in (2^l, 2^(l+1)]; exact powers of two sit at the
// top of their band.
int dyadic_band(double v) {
  int e = std::ilogb(v);  // 2^e <= v < 2^(e+1)
  if (v == std::ldexp(1.0, e)) return e - 1;
  return e;
}

void maximal_cubes_of_mask(const ModelConfig& cfg, const std::vector<std::uint8_t>& mask,
                           const Cube& q, std::vector<Cube>& out) {
  bool all = true, any = false;
  for_each_cell(cfg, q, [&](std::int64_t c) {
    if (mask[static_cast<std::size_t>(c)])
      any = true;
    else
      all = false;
  });
  if (all) {
    out.push_back(q);
    return;
  }
  if (!any || q.level == cfg.L) return;
  for (const Cube& c : children(cfg, q)) maximal_cubes_of_mask(cfg, mask, c, out);
}

}  // namespace

LevelSetDecomposition level_set_decomposition(const SparseFamily& fam,
                                              const std::vector<CellFunction>& g) {
  check_inputs(g);
  const ModelConfig& cfg = g.front().config();
  LevelSetDecomposition out{sparse_operator(fam, g), {}};
  const CellFunction& a = out.a;

  std::vector<int> attained;
  for (std::int64_t c = 0; c < a.size(); ++c)
    if (a[c] > 0.0) attained.push_back(dyadic_band(a[c]));
  std::sort(attained.begin(), attained.end());
  attained.erase(std::unique(attained.begin(), attained.end()), attained.end());

  auto omega_mask = [&](int l) {
    const double thr = std::ldexp(1.0, l);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(cfg.cell_count()), 0);
    for (std::int64_t c = 0; c < a.size(); ++c)
      if (a[c] > thr) mask[static_cast<std::size_t>(c)] = 1;
    return mask;
  };

  const std::vector<Cube> cubes = fam.all_cubes();
  const std::vector<double> coeffs = sparse_coefficients(fam, g);

  for (int l : attained) {
    LevelSetStage stage;
    stage.l = l;
    stage.omega = omega_mask(l);
    maximal_cubes_of_mask(cfg, stage.omega, root_cube(fam.grid), stage.maximal_cubes);
    std::sort(stage.maximal_cubes.begin(), stage.maximal_cubes.end());

    const std::vector<std::uint8_t> omega1 = omega_mask(l + 1);
    const std::vector<std::uint8_t> omega2 = omega_mask(l + 2);
    const double thr = std::ldexp(1.0, l);
    for (const Cube& q : stage.maximal_cubes) {
      std::vector<std::uint8_t> e(static_cast<std::size_t>(cfg.cell_count()), 0);
      for_each_cell(cfg, q, [&](std::int64_t c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        if (omega1[cc] && !omega2[cc]) e[cc] = 1;
      });
      // Localized operator built from the family cubes inside q only; its
      // coefficients are unchanged by the restriction.
      CellFunction a_loc(cfg, 0.0);
      for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (contains(q, cubes[i]))
          for_each_cell(cfg, cubes[i], [&](std::int64_t c) { a_loc[c] += coeffs[i]; });
      }
      for (std::int64_t c = 0; c < a_loc.size(); ++c) {
        if (e[static_cast<std::size_t>(c)] && !(a_loc[c] > thr * (1.0 - 1e-9)))
          throw std::logic_error("level_set_decomposition: localization inequality failed");
      }
      stage.e_sets.push_back(std::move(e));
    }
    out.stages.push_back(std::move(stage));
  }
  return out;
}

namespace {

struct Panel {
  double lo, hi;
};

std::vector<Panel> graded_panels(const RieszMesh& mesh) {
  if (mesh.geo_levels < 2 || mesh.subdiv < 1)
    throw std::invalid_argument("riesz mesh: needs >= 2 levels and >= 1 subdivision");
  std::vector<Panel> panels;
  panels.push_back(Panel{0.0, std::ldexp(1.0, -(mesh.geo_levels - 1))});
  for (int k = mesh.geo_levels - 2; k >= 0; --k) {
    const double lo = std::ldexp(1.0, -(k + 1));
    const double hi = std::ldexp(1.0, -k);
    for (int s = 0; s < mesh.subdiv; ++s) {
      panels.push_back(Panel{lo + (hi - lo) * s / mesh.subdiv,
                             lo + (hi - lo) * (s + 1) / mesh.subdiv});
    }
  }
  return panels;  // ascending, covering (0,1]
}

// Lower bound of min over the box {x} x [y1] x [y2] of K, from the monotone
// parts: the numerator decreases in y_i, the denominator increases as y_i
// moves away from x (here y_i <= 1 < x, so toward the panel's lower corner).
double kernel_lower(double x_lo, double x_hi, const Panel& p1, const Panel& p2) {
  const double num = 2.0 * x_lo - p1.hi - p2.hi;
  if (num <= 0.0) return 0.0;
  const double d1 = x_hi - p1.lo;
  const double d2 = x_hi - p2.lo;
  const double s = d1 * d1 + d2 * d2;
  return num / (s * std::sqrt(s));
}

// int_panel y^(eps-1) dy = (hi^eps - lo^eps) / eps, exactly.
double panel_mass(const Panel& p, double eps) {
  return (std::pow(p.hi, eps) - std::pow(p.lo, eps)) / eps;
}

double riesz_lower_at(double x_lo, double x_hi, const std::vector<Panel>& panels,
                      const std::vector<double>& masses) {
  double total = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    for (std::size_t j = 0; j < panels.size(); ++j) {
      const double k = kernel_lower(x_lo, x_hi, panels[i], panels[j]);
      if (k > 0.0) total += k * masses[i] * masses[j];
    }
  }
  return total;
}

}  // namespace

double riesz_like_apply(double eps, double x, const RieszMesh& mesh) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("riesz_like_apply: eps in (0,1]");
  if (!(x > 1.0)) throw std::domain_error("riesz_like_apply: requires x > 1");
  const std::vector<Panel> panels = graded_panels(mesh);
  std::vector<double> masses;
  masses.reserve(panels.size());
  for (const Panel& p : panels) masses.push_back(panel_mass(p, eps));
  return riesz_lower_at(x, x, panels, masses);
}

double riesz_lower_functional(double eps, double p, double v_exponent, int x_panels,
                              const RieszMesh& mesh) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("riesz_lower_functional: eps in (0,1]");
  if (!(p >= 1.0)) throw std::invalid_argument("riesz_lower_functional: p must be >= 1");
  if (x_panels < 1) throw std::invalid_argument("riesz_lower_functional: x_panels >= 1");
  const std::vector<Panel> panels = graded_panels(mesh);
  std::vector<double> masses;
  masses.reserve(panels.size());
  for (const Panel& p2 : panels) masses.push_back(panel_mass(p2, eps));
  double total = 0.0;
  for (int i = 0; i < x_panels; ++i) {
    const double x_lo = 1.0 + static_cast<double>(i) / x_panels;
    const double x_hi = 1.0 + static_cast<double>(i + 1) / x_panels;
    const double r_low = riesz_lower_at(x_lo, x_hi, panels, masses);
    // Evaluate x^a at the endpoint where it is smallest on the panel.
    const double v_low = std::pow(v_exponent >= 0.0 ? x_lo : x_hi, v_exponent);
    total += std::pow(r_low, p) * v_low * (x_hi - x_lo);
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace workbench
