#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "workbench/dyadic.hpp"
#include "workbench/rng.hpp"

// Sparse families of dyadic cubes: a staged collection {Q_{j,k}} where for
// each stage k the cubes are pairwise disjoint, the stage unions Gamma_k are
// nested, and the next stage covers at most half of each cube. Measures are
// compared through exact base-cell counts so the 1/2 threshold never flaps.

namespace workbench {

struct SparseFamily {
  GridId grid;
  std::vector<std::vector<Cube>> stages;  // stages[k], cubes sorted

  std::int64_t cube_count() const;
  std::vector<Cube> all_cubes() const;  // stage-major, lexicographic per stage
};

struct SparseCheck {
  bool ok = true;
  int condition = 0;  // 1 disjointness, 2 nesting, 3 half cover, 4 grid mismatch
  std::optional<Cube> offending;
  std::string detail;
};

// Checks the three defining conditions with integer cell arithmetic.
SparseCheck verify_sparse(const ModelConfig& cfg, const SparseFamily& fam);

// E(Q_{j,k}) = Q_{j,k} \ Gamma_{k+1}, as a cell mask (1 inside).
std::vector<std::uint8_t> sparse_e_set(const ModelConfig& cfg, const SparseFamily& fam,
                                       int stage, const Cube& q);
std::int64_t sparse_e_cell_count(const ModelConfig& cfg, const SparseFamily& fam, int stage,
                                 const Cube& q);

// Seeded recursive generator: every stage-k cube picks descendants covering
// at most half of it as its stage-(k+1) cubes. Always passes verify_sparse.
SparseFamily random_sparse(const ModelConfig& cfg, GridId grid, std::uint64_t seed, int depth);
// Same but rooted at an arbitrary cube instead of the grid root.
SparseFamily random_sparse_in(const ModelConfig& cfg, const Cube& top, std::uint64_t seed,
                              int depth);

// Stopping-time generator: stages are the maximal same-grid cubes of the
// level sets {M_D(g_vec) > a^l} over the attained l. The result is verified
// a posteriori; a non-sparse outcome throws (the caller may raise a).
class SparsenessError : public std::runtime_error {
 public:
  SparsenessError(const std::string& what, SparseCheck check)
      : std::runtime_error(what), check_(std::move(check)) {}
  const SparseCheck& check() const { return check_; }

 private:
  SparseCheck check_;
};

SparseFamily cz_sparse_from_functions(const std::vector<CellFunction>& g, GridId grid,
                                      double ratio_a);

// Sub-family restaged by chain depth (number of strictly containing members).
SparseFamily restage_subfamily(const ModelConfig& cfg, const SparseFamily& fam,
                               const std::vector<Cube>& subset);

// JSON round trip: {"grid":{"shift":[...]},"stages":[[{"k":..,"j":[..]}]]}.
std::string sparse_to_json(const SparseFamily& fam, const ModelConfig& cfg);
SparseFamily sparse_from_json(const std::string& text, const ModelConfig& cfg);

}  // namespace workbench
