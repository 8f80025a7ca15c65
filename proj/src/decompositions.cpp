#include "workbench/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace workbench {

// ---------------------------------------------------------------- principal

std::vector<Cube> PrincipalCubes::all() const {
  std::vector<Cube> out;
  for (const auto& g : generations) out.insert(out.end(), g.begin(), g.end());
  return out;
}

double sigma_average(const CellFunction& f, const CellFunction& sigma, const Cube& q) {
  const double sq = cube_integral(sigma, q);
  if (!(sq > 0.0)) throw std::domain_error("sigma_average: sigma vanishes on the cube");
  return cube_integral(f.cellwise_times(sigma), q) / sq;
}

namespace {

// Per-level integral tables so subtree averages are O(1) lookups.
struct AvgTable {
  const ModelConfig& cfg;
  std::vector<std::vector<double>> fs;  // int of f*sigma per level
  std::vector<std::vector<double>> s;   // int of sigma per level

  AvgTable(const CellFunction& f, const CellFunction& sigma, GridId grid)
      : cfg(f.config()) {
    const CellFunction prod = f.cellwise_times(sigma);
    for (int k = 0; k <= cfg.L; ++k) {
      fs.push_back(level_integrals(prod, grid, k));
      s.push_back(level_integrals(sigma, grid, k));
    }
  }

  double avg(const Cube& q) const {
    const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, q));
    const double sq = s[static_cast<std::size_t>(q.level)][li];
    if (!(sq > 0.0)) throw std::domain_error("principal cubes: sigma vanishes on a subcube");
    return fs[static_cast<std::size_t>(q.level)][li] / sq;
  }
};

void collect_stopping_children(const AvgTable& t, double bar, const Cube& q,
                               std::vector<Cube>& out) {
  if (q.level >= t.cfg.L) return;
  for (const Cube& c : children(t.cfg, q)) {
    if (t.avg(c) > bar)
      out.push_back(c);
    else
      collect_stopping_children(t, bar, c, out);
  }
}

}  // namespace

PrincipalCubes build_principal_cubes(const CellFunction& f, const CellFunction& sigma,
                                     const Cube& root) {
  if (!(f.config() == sigma.config()))
    throw std::invalid_argument("build_principal_cubes: config mismatch");
  const ModelConfig& cfg = f.config();
  bool sigma_positive = true;
  for_each_cell(cfg, root, [&](std::int64_t c) { sigma_positive &= sigma[c] > 0.0; });
  if (!sigma_positive)
    throw std::domain_error("build_principal_cubes: sigma must be positive on the root");

  const AvgTable table(f, sigma, root.grid);
  PrincipalCubes out;
  out.root = root;
  out.generations.push_back({root});
  std::vector<Cube> frontier{root};
  while (!frontier.empty()) {
    std::vector<Cube> next;
    for (const Cube& g : frontier)
      collect_stopping_children(table, 4.0 * table.avg(g), g, next);
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    out.generations.push_back(next);
    frontier = std::move(next);
  }

  std::set<Cube> principal;
  for (const auto& gen : out.generations) principal.insert(gen.begin(), gen.end());

  // Minimal principal cube per dyadic subcube, plus the control inequality.
  struct Walk {
    const ModelConfig& cfg;
    const AvgTable& t;
    const std::set<Cube>& principal;
    PrincipalCubes& out;
    void run(const Cube& q, Cube current) {
      if (principal.count(q)) current = q;
      out.minimal_principal.emplace(q, current);
      if (!(t.avg(q) <= 4.0 * t.avg(current) * (1.0 + 1e-12)))
        throw std::logic_error("build_principal_cubes: control inequality failed");
      if (q.level < cfg.L)
        for (const Cube& c : children(cfg, q)) run(c, current);
    }
  };
  Walk{cfg, table, principal, out}.run(root, root);
  return out;
}

// ------------------------------------------------------------------- corona

double corona_density(const CellFunction& sigma1, const CellFunction& sigma2, const Cube& q) {
  const double m = measure(sigma1.config(), q);
  return cube_integral(sigma1, q) * cube_integral(sigma2, q) / (m * m);
}

namespace {

std::vector<Cube> maximal_elements(const std::vector<Cube>& cubes) {
  std::vector<Cube> out;
  for (const Cube& q : cubes) {
    bool dominated = false;
    for (const Cube& r : cubes)
      if (r != q && contains(r, q)) dominated = true;
    if (!dominated) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CoronaDecomposition build_corona(const std::vector<Cube>& members, const CellFunction& sigma1,
                                 const CellFunction& sigma2) {
  if (members.empty()) throw std::invalid_argument("build_corona: empty collection");
  if (!(sigma1.config() == sigma2.config()))
    throw std::invalid_argument("build_corona: config mismatch");
  for (const Cube& q : members)
    if (q.grid != members.front().grid)
      throw std::invalid_argument("build_corona: members must share one grid");

  std::map<Cube, double> rho;
  for (const Cube& q : members) rho.emplace(q, corona_density(sigma1, sigma2, q));

  CoronaDecomposition out;
  std::vector<Cube> queue = maximal_elements(members);
  out.tops = queue;
  while (!queue.empty()) {
    const Cube top = queue.back();
    queue.pop_back();
    const double bar = 4.0 * rho.at(top);
    std::vector<Cube> violators;
    for (const Cube& q : members)
      if (q != top && contains(top, q) && rho.at(q) > bar) violators.push_back(q);
    for (const Cube& t : maximal_elements(violators)) {
      out.tops.push_back(t);
      queue.push_back(t);
    }
  }
  std::sort(out.tops.begin(), out.tops.end());
  out.tops.erase(std::unique(out.tops.begin(), out.tops.end()), out.tops.end());

  // Minimal containing top: scan tops smallest-first.
  std::vector<Cube> by_depth = out.tops;
  std::sort(by_depth.begin(), by_depth.end(),
            [](const Cube& a, const Cube& b) { return a.level > b.level || (a.level == b.level && a < b); });
  for (const Cube& q : members) {
    const Cube* found = nullptr;
    for (const Cube& t : by_depth) {
      if (contains(t, q)) {
        found = &t;
        break;
      }
    }
    if (!found) throw std::logic_error("build_corona: member has no containing top");
    out.top_of.emplace(q, *found);
    out.cell[*found].push_back(q);
  }
  for (auto& [top, cell] : out.cell) std::sort(cell.begin(), cell.end());

  // Re-verify the two stopping conditions.
  for (const Cube& q : members) {
    if (!(4.0 * rho.at(out.top_of.at(q)) * (1.0 + 1e-12) >= rho.at(q)))
      throw std::logic_error("build_corona: control inequality failed");
  }
  for (const Cube& a : out.tops)
    for (const Cube& b : out.tops)
      if (a != b && contains(b, a) && !(rho.at(a) > 4.0 * rho.at(b)))
        throw std::logic_error("build_corona: growth inequality failed");
  return out;
}

// ------------------------------------------------------------------ whitney

namespace {

struct LeafGrid {
  const ModelConfig& cfg;
  std::int64_t G;  // leaves per axis = 2^L

  explicit LeafGrid(const ModelConfig& cfg_) : cfg(cfg_), G(std::int64_t{1} << cfg_.L) {}

  std::int64_t leaf_count() const { return cfg.n == 1 ? G : G * G; }

  // Squared distance in cell units between two leaf blocks (3 cells/axis).
  static std::int64_t axis_gap_cells(std::int64_t a, std::int64_t b) {
    const std::int64_t d = a > b ? a - b : b - a;
    return d == 0 ? 0 : (d - 1) * 3;
  }
};

// dist^2 (cell units) from each leaf block to the complement: unmarked leaf
// blocks and the outer boundary of the segment/square.
std::vector<std::int64_t> leaf_dist2(const LeafGrid& lg, const std::vector<std::uint8_t>& omega) {
  const std::int64_t G = lg.G;
  std::vector<std::int64_t> out(static_cast<std::size_t>(lg.leaf_count()));
  std::vector<std::int64_t> unmarked;
  for (std::int64_t i = 0; i < lg.leaf_count(); ++i)
    if (!omega[static_cast<std::size_t>(i)]) unmarked.push_back(i);

  auto boundary2 = [&](std::int64_t lx, std::int64_t ly) {
    std::int64_t d = std::min(3 * lx, 3 * (G - 1 - lx));
    if (lg.cfg.n == 2) d = std::min(d, std::min(3 * ly, 3 * (G - 1 - ly)));
    return d * d;
  };

  for (std::int64_t i = 0; i < lg.leaf_count(); ++i) {
    const std::int64_t lx = lg.cfg.n == 1 ? i : i / G;
    const std::int64_t ly = lg.cfg.n == 1 ? 0 : i % G;
    std::int64_t best = boundary2(lx, ly);
    for (std::int64_t u : unmarked) {
      const std::int64_t ux = lg.cfg.n == 1 ? u : u / G;
      const std::int64_t uy = lg.cfg.n == 1 ? 0 : u % G;
      const std::int64_t gx = LeafGrid::axis_gap_cells(lx, ux);
      const std::int64_t gy = lg.cfg.n == 1 ? 0 : LeafGrid::axis_gap_cells(ly, uy);
      best = std::min(best, gx * gx + gy * gy);
      if (best == 0) break;
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

struct SubtreeInfo {
  // per level k: per cube linear index, marked-leaf count and min leaf dist^2
  std::vector<std::vector<std::int64_t>> marked;
  std::vector<std::vector<std::int64_t>> dist2;
};

SubtreeInfo build_subtree_info(const ModelConfig& cfg, const std::vector<std::uint8_t>& omega,
                               const std::vector<std::int64_t>& d2leaf) {
  SubtreeInfo info;
  info.marked.resize(static_cast<std::size_t>(cfg.L + 1));
  info.dist2.resize(static_cast<std::size_t>(cfg.L + 1));
  const std::int64_t G = std::int64_t{1} << cfg.L;
  const std::int64_t leaves = cfg.n == 1 ? G : G * G;
  info.marked[static_cast<std::size_t>(cfg.L)].assign(static_cast<std::size_t>(leaves), 0);
  info.dist2[static_cast<std::size_t>(cfg.L)] = d2leaf;
  for (std::int64_t i = 0; i < leaves; ++i)
    info.marked[static_cast<std::size_t>(cfg.L)][static_cast<std::size_t>(i)] =
        omega[static_cast<std::size_t>(i)] ? 1 : 0;
  for (int k = cfg.L - 1; k >= 0; --k) {
    const std::int64_t m = std::int64_t{1} << k;
    const std::int64_t count = cfg.n == 1 ? m : m * m;
    auto& mk = info.marked[static_cast<std::size_t>(k)];
    auto& dk = info.dist2[static_cast<std::size_t>(k)];
    mk.assign(static_cast<std::size_t>(count), 0);
    dk.assign(static_cast<std::size_t>(count), 0);
    const auto& mprev = info.marked[static_cast<std::size_t>(k + 1)];
    const auto& dprev = info.dist2[static_cast<std::size_t>(k + 1)];
    for (std::int64_t i = 0; i < count; ++i) {
      const std::int64_t jx = cfg.n == 1 ? i : i / m;
      const std::int64_t jy = cfg.n == 1 ? 0 : i % m;
      std::int64_t msum = 0;
      std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
      for (std::int64_t tx = 0; tx < (cfg.n == 1 ? 2 : 2); ++tx) {
        for (std::int64_t ty = 0; ty < (cfg.n == 1 ? 1 : 2); ++ty) {
          const std::int64_t cx = 2 * jx + tx;
          const std::int64_t cy = 2 * jy + ty;
          const std::int64_t ci = cfg.n == 1 ? cx : cx * (2 * m) + cy;
          msum += mprev[static_cast<std::size_t>(ci)];
          dmin = std::min(dmin, dprev[static_cast<std::size_t>(ci)]);
        }
      }
      mk[static_cast<std::size_t>(i)] = msum;
      dk[static_cast<std::size_t>(i)] = dmin;
    }
  }
  return info;
}

std::int64_t leaves_per_cube(const ModelConfig& cfg, int level) {
  const std::int64_t s = std::int64_t{1} << (cfg.L - level);
  return cfg.n == 1 ? s : s * s;
}

void select_whitney(const ModelConfig& cfg, const SubtreeInfo& info, const Cube& q,
                    std::vector<WhitneyCube>& out) {
  const std::size_t k = static_cast<std::size_t>(q.level);
  const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, q));
  const std::int64_t marked = info.marked[k][li];
  if (marked == 0) return;
  const bool inside = marked == leaves_per_cube(cfg, q.level);
  if (inside) {
    const std::int64_t side = cube_side_cells(cfg, q);
    if (info.dist2[k][li] >= cfg.n * side * side) {
      out.push_back(WhitneyCube{q, false});
      return;
    }
    if (q.level == cfg.L) {
      out.push_back(WhitneyCube{q, true});
      return;
    }
  }
  if (q.level == cfg.L) return;
  for (const Cube& c : children(cfg, q)) select_whitney(cfg, info, c, out);
}

struct CellBox {
  std::array<std::int64_t, 2> lo, hi;  // inclusive cell ranges per axis
};

CellBox box_of(const ModelConfig& cfg, const Cube& q) {
  CellBox b{};
  const std::int64_t side = cube_side_cells(cfg, q);
  for (int a = 0; a < cfg.n; ++a) {
    b.lo[static_cast<std::size_t>(a)] = q.index[static_cast<std::size_t>(a)] * side;
    b.hi[static_cast<std::size_t>(a)] = b.lo[static_cast<std::size_t>(a)] + side - 1;
  }
  return b;
}

bool boxes_touch(const ModelConfig& cfg, const CellBox& a, const CellBox& b) {
  for (int ax = 0; ax < cfg.n; ++ax) {
    const std::size_t s = static_cast<std::size_t>(ax);
    if (a.lo[s] > b.hi[s] + 1 || b.lo[s] > a.hi[s] + 1) return false;
  }
  return true;
}

}  // namespace

WhitneyDecomposition whitney(const ModelConfig& cfg, const std::vector<std::uint8_t>& omega_leaf,
                             double gamma) {
  const LeafGrid lg(cfg);
  if (static_cast<std::int64_t>(omega_leaf.size()) != lg.leaf_count())
    throw std::invalid_argument("whitney: omega mask must have one entry per finest cube");
  if (!(gamma > 1.0 && gamma < 1.25))
    throw std::invalid_argument("whitney: gamma must lie in (1, 5/4)");
  bool any = false;
  for (std::uint8_t m : omega_leaf) any |= m != 0;
  if (!any) throw std::domain_error("whitney: omega is empty");

  const std::vector<std::int64_t> d2leaf = leaf_dist2(lg, omega_leaf);
  const SubtreeInfo info = build_subtree_info(cfg, omega_leaf, d2leaf);

  WhitneyDecomposition out;
  out.gamma = gamma;
  select_whitney(cfg, info, root_cube(GridId{}), out.cubes);
  std::sort(out.cubes.begin(), out.cubes.end(),
            [](const WhitneyCube& a, const WhitneyCube& b) { return a.cube < b.cube; });

  // Emergent statistics: the distance band ratio and the dilate overlap.
  double max_ratio = 0.0;
  for (const WhitneyCube& wc : out.cubes) {
    const std::size_t k = static_cast<std::size_t>(wc.cube.level);
    const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, wc.cube));
    const double side = static_cast<double>(cube_side_cells(cfg, wc.cube));
    max_ratio = std::max(max_ratio, std::sqrt(static_cast<double>(info.dist2[k][li]) /
                                              (cfg.n * side * side)));
  }
  out.max_dist_ratio = max_ratio;

  const std::int64_t N = cfg.cells_per_axis();
  std::vector<int> counts(static_cast<std::size_t>(cfg.cell_count()), 0);
  for (const WhitneyCube& wc : out.cubes) {
    const CellBox b = box_of(cfg, wc.cube);
    std::array<std::int64_t, 2> lo{0, 0}, hi{0, 0};
    std::array<double, 2> center{0, 0}, half{0, 0};
    for (int a = 0; a < cfg.n; ++a) {
      const std::size_t s = static_cast<std::size_t>(a);
      center[s] = 0.5 * static_cast<double>(b.lo[s] + b.hi[s] + 1);
      half[s] = 0.5 * gamma * static_cast<double>(b.hi[s] + 1 - b.lo[s]);
      lo[s] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(center[s] - half[s] - 0.5)));
      hi[s] = std::min<std::int64_t>(N - 1, static_cast<std::int64_t>(std::ceil(center[s] + half[s] - 0.5)));
    }
    auto inside = [&](std::int64_t c, int axis) {
      const std::size_t s = static_cast<std::size_t>(axis);
      return std::abs(static_cast<double>(c) + 0.5 - center[s]) <= half[s];
    };
    if (cfg.n == 1) {
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
        if (inside(x, 0)) ++counts[static_cast<std::size_t>(x)];
    } else {
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        if (!inside(x, 0)) continue;
        for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
          if (inside(y, 1)) ++counts[static_cast<std::size_t>(x * N + y)];
      }
    }
  }
  out.max_overlap = *std::max_element(counts.begin(), counts.end());
  return out;
}

WhitneyCheck verify_whitney(const ModelConfig& cfg, const std::vector<std::uint8_t>& omega_leaf,
                            const WhitneyDecomposition& w, int overlap_cap) {
  const LeafGrid lg(cfg);
  // (1) exact cover of omega with disjoint interiors: every marked leaf is in
  // exactly one cube, no cube covers an unmarked leaf.
  std::vector<int> painted(static_cast<std::size_t>(lg.leaf_count()), 0);
  for (const WhitneyCube& wc : w.cubes) {
    const std::int64_t s = std::int64_t{1} << (cfg.L - wc.cube.level);
    const std::int64_t bx = wc.cube.index[0] * s;
    const std::int64_t by = wc.cube.index[1] * s;
    for (std::int64_t tx = 0; tx < s; ++tx) {
      for (std::int64_t ty = 0; ty < (cfg.n == 1 ? 1 : s); ++ty) {
        const std::int64_t li = cfg.n == 1 ? bx + tx : (bx + tx) * lg.G + by + ty;
        ++painted[static_cast<std::size_t>(li)];
      }
    }
  }
  for (std::int64_t i = 0; i < lg.leaf_count(); ++i) {
    const int want = omega_leaf[static_cast<std::size_t>(i)] ? 1 : 0;
    if (painted[static_cast<std::size_t>(i)] != want)
      return WhitneyCheck{false, "cover/disjointness failed at leaf " + std::to_string(i)};
  }

  // (2) sqrt(n) l <= dist <= 4 sqrt(n) l, lower bound waived on exempt leaves.
  const std::vector<std::int64_t> d2leaf = leaf_dist2(lg, omega_leaf);
  const SubtreeInfo info = build_subtree_info(cfg, omega_leaf, d2leaf);
  for (const WhitneyCube& wc : w.cubes) {
    const std::size_t k = static_cast<std::size_t>(wc.cube.level);
    const std::size_t li = static_cast<std::size_t>(cube_linear_index(cfg, wc.cube));
    const std::int64_t side = cube_side_cells(cfg, wc.cube);
    const std::int64_t d2 = info.dist2[k][li];
    if (!wc.exempt && d2 < cfg.n * side * side)
      return WhitneyCheck{false, "distance lower bound failed"};
    if (d2 > 16 * cfg.n * side * side) return WhitneyCheck{false, "distance upper bound failed"};
    if (wc.exempt && wc.cube.level != cfg.L)
      return WhitneyCheck{false, "exempt cube above the finest level"};
  }

  // (3) touching cubes have side ratio within [1/4, 4].
  for (std::size_t i = 0; i < w.cubes.size(); ++i) {
    const CellBox bi = box_of(cfg, w.cubes[i].cube);
    for (std::size_t j = i + 1; j < w.cubes.size(); ++j) {
      const CellBox bj = box_of(cfg, w.cubes[j].cube);
      if (!boxes_touch(cfg, bi, bj)) continue;
      if (std::abs(w.cubes[i].cube.level - w.cubes[j].cube.level) > 2)
        return WhitneyCheck{false, "touching side ratio outside [1/4, 4]"};
    }
  }

  // (4) bounded overlap of the gamma-dilates.
  if (w.max_overlap > overlap_cap)
    return WhitneyCheck{false, "dilate overlap " + std::to_string(w.max_overlap) + " exceeds cap"};
  return WhitneyCheck{};
}

}  // namespace workbench
