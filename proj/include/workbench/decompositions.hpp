#pragma once

#include <map>
#include <string>
#include <vector>

#include "workbench/dyadic.hpp"

// Stopping-time structures: principal cubes with stopping factor 4, the
// two-measure corona decomposition with density sigma1(Q)sigma2(Q)/|Q|^2, and
// the dyadic Whitney decomposition of an open subset of the non-periodic unit
// segment/square. Each constructor re-verifies its defining conditions.

namespace workbench {

// ---- principal cubes ----

struct PrincipalCubes {
  Cube root;
  std::vector<std::vector<Cube>> generations;  // generations[0] = {root}
  // Minimal principal cube containing each dyadic subcube of root.
  std::map<Cube, Cube> minimal_principal;

  std::vector<Cube> all() const;
};

// E^sigma_Q f = sigma(Q)^(-1) int_Q f sigma.
double sigma_average(const CellFunction& f, const CellFunction& sigma, const Cube& q);

// Stopping rule: a subcube enters the next generation when its sigma-average
// strictly exceeds 4x its principal ancestor's, maximal such first.
PrincipalCubes build_principal_cubes(const CellFunction& f, const CellFunction& sigma,
                                     const Cube& root);

// ---- corona decomposition ----

struct CoronaDecomposition {
  std::vector<Cube> tops;               // the collection of stopping tops
  std::map<Cube, Cube> top_of;          // minimal containing top per member
  std::map<Cube, std::vector<Cube>> cell;  // members grouped by their top
};

double corona_density(const CellFunction& sigma1, const CellFunction& sigma2, const Cube& q);

// Requires every member to lie inside some maximal member. Tops grow by
// density factors > 4 along nested chains; ties keep the parent.
CoronaDecomposition build_corona(const std::vector<Cube>& members, const CellFunction& sigma1,
                                 const CellFunction& sigma2);

// ---- Whitney decomposition ----

// The Whitney model lives on the non-periodic segment/square [0,1]^n with the
// unshifted dyadic grid. Omega is given as a mask over the level-L cubes
// (side 2^-L, the finest dyadic scale); its complement within [0,1]^n always
// includes the outer boundary. Distances are Euclidean between closed cubes
// and are compared through exact integer cell arithmetic.
struct WhitneyCube {
  Cube cube;       // grid shift 0, interpreted without torus wrap
  bool exempt = false;  // finest-level cube adjacent to the boundary; the
                        // lower distance bound cannot hold at this scale
};

struct WhitneyDecomposition {
  std::vector<WhitneyCube> cubes;
  double gamma = 1.2;
  int max_overlap = 0;        // max over cells of sum_j chi_{gamma Q_j}
  double max_dist_ratio = 0;  // max over cubes of dist / (sqrt(n) l)
};

// Omega mask indexed by leaf-cube linear index (2^(Ln) entries). Throws if
// Omega is empty; a full mask is allowed (the complement is the boundary).
WhitneyDecomposition whitney(const ModelConfig& cfg, const std::vector<std::uint8_t>& omega_leaf,
                             double gamma = 1.2);

struct WhitneyCheck {
  bool ok = true;
  std::string detail;
};

// The four defining conditions: exact cover with disjoint interiors, the
// distance band sqrt(n) l <= dist <= 4 sqrt(n) l (lower bound waived on
// exempt finest-level cubes), touching side ratios within [1/4, 4], and
// bounded overlap of the gamma-dilates.
WhitneyCheck verify_whitney(const ModelConfig& cfg, const std::vector<std::uint8_t>& omega_leaf,
                            const WhitneyDecomposition& w, int overlap_cap);

}  // namespace workbench
