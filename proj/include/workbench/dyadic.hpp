#pragma once

#include <array>
#include <cstdint>
#include <vector>

// Finite dyadic model on the periodic unit cube.
//
// The torus [0,1)^n is discretized into N = 3*2^L cells per axis. A grid is
// the standard dyadic grid translated by s/3 per axis (s in {0,1,2}); the
// translation is the same at every level, so any two cubes of one grid are
// nested or disjoint, and every cube of every grid is an exact union of base
// cells (a level-k cube spans 3*2^(L-k) cells per axis, and the translation
// offset s*2^L is a whole number of cells).

namespace workbench {

struct ModelConfig {
  int n = 1;  // spatial dimension, 1 or 2
  int L = 1;  // maximum dyadic depth, 1..12

  ModelConfig() = default;
  ModelConfig(int n_, int L_);

  int cells_per_axis() const { return 3 << L; }  // N = 3*2^L
  std::int64_t cell_count() const;               // N^n
  double cell_volume() const;                    // N^(-n)

  bool operator==(const ModelConfig&) const = default;
};

struct GridId {
  std::array<int, 2> shift{0, 0};  // per-axis shift in {0,1,2}; shift[1] unused for n=1

  bool operator==(const GridId&) const = default;
  auto operator<=>(const GridId&) const = default;
};

struct Cube {
  GridId grid;
  int level = 0;
  std::array<std::int64_t, 2> index{0, 0};  // per-axis index in [0, 2^level)

  bool operator==(const Cube&) const = default;
  // Deterministic total order: (grid shift, level, index), lexicographic.
  auto operator<=>(const Cube&) const = default;
};

std::vector<GridId> all_grids(const ModelConfig& cfg);

Cube root_cube(GridId grid);

// All 2^(kn) cubes of one grid at one level, in index-lexicographic order.
std::vector<Cube> cubes_at_level(const ModelConfig& cfg, GridId grid, int k);

// The 2^n cubes one level down that partition Q (same grid).
std::vector<Cube> children(const ModelConfig& cfg, const Cube& q);

Cube parent(const Cube& q);
Cube ancestor_at(const Cube& q, int level);

// Same-grid containment (trichotomy: equal, nested or disjoint).
bool contains(const Cube& outer, const Cube& inner);

// The unique level-k cube of the grid whose cell extent includes the cell.
Cube cube_containing_cell(const ModelConfig& cfg, GridId grid, int k,
                          std::int64_t cell_linear_index);

// Whether the cube crosses the torus seam on some axis (never for shift 0).
bool cube_wraps(const ModelConfig& cfg, const Cube& q);

double measure(const ModelConfig& cfg, const Cube& q);              // exactly 2^(-kn)
std::int64_t cube_cell_count(const ModelConfig& cfg, const Cube& q);  // (3*2^(L-k))^n
std::int64_t cube_side_cells(const ModelConfig& cfg, const Cube& q);  // 3*2^(L-k)
// First cell of the cube along an axis, before torus wrap reduction.
std::int64_t cube_start_cell(const ModelConfig& cfg, const Cube& q, int axis);

// Visits the linear indices of the cube's cells in lexicographic order of the
// cube-local offsets. All integrals accumulate in exactly this order.
template <class F>
void for_each_cell(const ModelConfig& cfg, const Cube& q, F&& f) {
  const std::int64_t N = cfg.cells_per_axis();
  const std::int64_t side = cube_side_cells(cfg, q);
  const std::int64_t sx = cube_start_cell(cfg, q, 0);
  if (cfg.n == 1) {
    for (std::int64_t t = 0; t < side; ++t) f((sx + t) % N);
  } else {
    const std::int64_t sy = cube_start_cell(cfg, q, 1);
    for (std::int64_t tx = 0; tx < side; ++tx) {
      const std::int64_t x = (sx + tx) % N;
      for (std::int64_t ty = 0; ty < side; ++ty) {
        f(x * N + (sy + ty) % N);
      }
    }
  }
}

// A non-negative function given by one constant value per base cell.
class CellFunction {
 public:
  CellFunction() = default;
  explicit CellFunction(const ModelConfig& cfg, double value = 0.0);
  CellFunction(const ModelConfig& cfg, std::vector<double> values);

  static CellFunction indicator(const ModelConfig& cfg, const Cube& q);

  const ModelConfig& config() const { return cfg_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }

  double integral() const;  // mean of the cell values
  double min_value() const;
  double max_value() const;

  CellFunction cellwise_pow(double e) const;
  CellFunction cellwise_times(const CellFunction& g) const;
  CellFunction scaled(double c) const;
  CellFunction clamped_min(double floor) const;
  // Zero outside the cube, unchanged inside.
  CellFunction masked(const Cube& q) const;

 private:
  ModelConfig cfg_;
  std::vector<double> values_;
};

double cube_integral(const CellFunction& f, const Cube& q);
double cube_average(const CellFunction& f, const Cube& q);

// Integrals of every level-k cube of the grid, indexed by the cube's linear
// index (index[0] for n=1, index[0]*2^k+index[1] for n=2). Each entry equals
// cube_integral of that cube bit-for-bit.
std::vector<double> level_integrals(const CellFunction& f, GridId grid, int k);

std::int64_t cube_linear_index(const ModelConfig& cfg, const Cube& q);

}  // namespace workbench
