#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "workbench/operators.hpp"
#include "workbench/rng.hpp"

using namespace workbench;

namespace {

CellFunction random_density(const ModelConfig& cfg, XorShift64Star& rng) {
  std::vector<double> vals(static_cast<std::size_t>(cfg.cell_count()));
  for (double& v : vals) v = rng.below(4) == 0 ? 0.0 : rng.uniform(0.0, 2.0);
  return CellFunction(cfg, std::move(vals));
}

// Independent per-cell supremum over every cube of the grid.
CellFunction brute_force_maximal(const std::vector<CellFunction>& g, GridId grid) {
  const ModelConfig& cfg = g.front().config();
  CellFunction out(cfg, 0.0);
  for (int k = 0; k <= cfg.L; ++k) {
    for (const Cube& q : cubes_at_level(cfg, grid, k)) {
      double val = 1.0;
      for (const CellFunction& f : g) val *= cube_average(f, q);
      for_each_cell(cfg, q, [&](std::int64_t c) { out[c] = std::max(out[c], val); });
    }
  }
  return out;
}

// Composite Simpson on (0,1]^2 for the smooth eps = 1 integrand, refined
// until two consecutive grids agree to 1e-8 relative.
double simpson_reference_eps1(double x) {
  auto kernel = [&](double y1, double y2) {
    const double num = 2.0 * x - y1 - y2;
    const double s = (x - y1) * (x - y1) + (x - y2) * (x - y2);
    return num / (s * std::sqrt(s));
  };
  auto simpson = [&](int n) {
    auto weight = [&](int i) { return i == 0 || i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
    const double h = 1.0 / n;
    double total = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        total += weight(i) * weight(j) * kernel(i * h, j * h);
    return total * h * h / 9.0;
  };
  double prev = simpson(16);
  for (int n = 32; n <= 4096; n *= 2) {
    const double cur = simpson(n);
    if (std::abs(cur - prev) <= 1e-8 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

TEST_CASE("dyadic maximal function") {
  const ModelConfig cfg(1, 1);

  SUBCASE("single function (4,0): output (4,2)") {
    const CellFunction g(cfg, {4, 4, 4, 0, 0, 0});
    const CellFunction m = dyadic_maximal({g}, GridId{});
    for (int c = 0; c < 3; ++c) CHECK(m[c] == doctest::Approx(4.0));
    for (int c = 3; c < 6; ++c) CHECK(m[c] == doctest::Approx(2.0));
  }

  SUBCASE("bilinear with crossed supports: constant 4") {
    const CellFunction g1(cfg, {4, 4, 4, 0, 0, 0});
    const CellFunction g2(cfg, {0, 0, 0, 4, 4, 4});
    const CellFunction m = dyadic_maximal({g1, g2}, GridId{});
    for (int c = 0; c < 6; ++c) CHECK(m[c] == doctest::Approx(4.0));
  }

  SUBCASE("constant inputs: product of constants") {
    const CellFunction g(cfg, 1.0);
    const CellFunction m = dyadic_maximal({g, g}, GridId{});
    for (int c = 0; c < 6; ++c) CHECK(m[c] == doctest::Approx(1.0));
  }

  SUBCASE("matches the brute-force supremum exactly") {
    XorShift64Star rng(83);
    for (const ModelConfig& c2 : {ModelConfig(1, 4), ModelConfig(2, 3)}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<CellFunction> g{random_density(c2, rng), random_density(c2, rng)};
        for (const GridId& grid : all_grids(c2)) {
          const CellFunction fast = dyadic_maximal(g, grid);
          const CellFunction slow = brute_force_maximal(g, grid);
          for (std::int64_t c = 0; c < fast.size(); ++c) CHECK(fast[c] == slow[c]);
        }
      }
    }
  }
}

TEST_CASE("multi grid maximal dominates every single grid") {
  const ModelConfig cfg(1, 2);
  XorShift64Star rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CellFunction> g{random_density(cfg, rng)};
    const CellFunction envelope = multi_grid_maximal(g);
    CellFunction manual(cfg, 0.0);
    for (const GridId& grid : all_grids(cfg)) {
      const CellFunction m = dyadic_maximal(g, grid);
      for (std::int64_t c = 0; c < m.size(); ++c) {
        CHECK(envelope[c] >= m[c]);
        manual[c] = std::max(manual[c], m[c]);
      }
    }
    for (std::int64_t c = 0; c < manual.size(); ++c) CHECK(envelope[c] == manual[c]);
  }
}

TEST_CASE("sparse operator") {
  const ModelConfig cfg(1, 1);
  const Cube root = root_cube(GridId{});
  const Cube left{GridId{}, 1, {0, 0}};

  SUBCASE("ones over {root, left}: 2 on the left half, 1 on the right") {
    const SparseFamily fam{GridId{}, {{root}, {left}}};
    const CellFunction a =
        sparse_operator(fam, {CellFunction(cfg, 1.0), CellFunction(cfg, 1.0)});
    for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(2.0));
    for (int c = 3; c < 6; ++c) CHECK(a[c] == doctest::Approx(1.0));
  }

  SUBCASE("root only: the constant product of integrals") {
    const SparseFamily fam{GridId{}, {{root}}};
    const CellFunction g1(cfg, {1, 2, 3, 4, 5, 6});
    const CellFunction g2(cfg, {2, 2, 2, 2, 2, 2});
    const CellFunction a = sparse_operator(fam, {g1, g2});
    for (int c = 0; c < 6; ++c)
      CHECK(a[c] == doctest::Approx(g1.integral() * g2.integral()).epsilon(1e-14));
  }

  SUBCASE("two-term hand sum: (6, 2)") {
    const SparseFamily fam{GridId{}, {{root}, {left}}};
    const CellFunction g1(cfg, {4, 4, 4, 0, 0, 0});
    const CellFunction g2(cfg, 1.0);
    const CellFunction a = sparse_operator(fam, {g1, g2});
    for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(6.0));
    for (int c = 3; c < 6; ++c) CHECK(a[c] == doctest::Approx(2.0));
  }

  SUBCASE("multilinearity in each slot") {
    const ModelConfig fine(1, 3);
    XorShift64Star rng(97);
    const SparseFamily fam = random_sparse(fine, GridId{}, 12345, 3);
    const CellFunction a = random_density(fine, rng);
    const CellFunction b = random_density(fine, rng);
    const CellFunction other = random_density(fine, rng);
    const double c = 2.75;

    CellFunction sum(fine, 0.0);
    for (std::int64_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + c * b[i];
    const CellFunction lhs = sparse_operator(fam, {sum, other});
    const CellFunction ra = sparse_operator(fam, {a, other});
    const CellFunction rb = sparse_operator(fam, {b, other});
    for (std::int64_t i = 0; i < lhs.size(); ++i)
      CHECK(lhs[i] == doctest::Approx(ra[i] + c * rb[i]).epsilon(1e-12));
  }
}

TEST_CASE("level set decomposition") {
  const ModelConfig cfg(1, 1);
  const Cube root = root_cube(GridId{});
  const Cube left{GridId{}, 1, {0, 0}};

  SUBCASE("constant operator: one stage, the root, band (1/2, 1]") {
    const SparseFamily fam{GridId{}, {{root}}};
    const LevelSetDecomposition lsd =
        level_set_decomposition(fam, {CellFunction(cfg, 1.0), CellFunction(cfg, 1.0)});
    REQUIRE(lsd.stages.size() == 1);
    CHECK(lsd.stages[0].l == -1);
    CHECK(lsd.stages[0].maximal_cubes == std::vector<Cube>{root});
  }

  SUBCASE("values (6,2): bands l = 0 and l = 2, omega_2 is the left half") {
    const SparseFamily fam{GridId{}, {{root}, {left}}};
    const CellFunction g1(cfg, {4, 4, 4, 0, 0, 0});
    const LevelSetDecomposition lsd = level_set_decomposition(fam, {g1, CellFunction(cfg, 1.0)});
    REQUIRE(lsd.stages.size() == 2);
    CHECK(lsd.stages[0].l == 0);  // 2 lies in (1, 2]
    CHECK(lsd.stages[0].maximal_cubes == std::vector<Cube>{root});
    CHECK(lsd.stages[1].l == 2);  // 6 lies in (4, 8]
    CHECK(lsd.stages[1].maximal_cubes == std::vector<Cube>{left});
    for (int c = 0; c < 3; ++c) CHECK(lsd.stages[1].omega[static_cast<std::size_t>(c)] == 1);
    for (int c = 3; c < 6; ++c) CHECK(lsd.stages[1].omega[static_cast<std::size_t>(c)] == 0);
  }

  SUBCASE("empty family: no stages") {
    const SparseFamily fam{GridId{}, {}};
    const LevelSetDecomposition lsd =
        level_set_decomposition(fam, {CellFunction(cfg, 1.0), CellFunction(cfg, 1.0)});
    CHECK(lsd.stages.empty());
  }

  SUBCASE("random families: localization verified, E-sets disjoint per parity") {
    const ModelConfig fine(1, 4);
    XorShift64Star rng(101);
    for (int trial = 0; trial < 20; ++trial) {
      const SparseFamily fam = random_sparse(fine, GridId{}, rng.next(), 4);
      std::vector<CellFunction> g{random_density(fine, rng), random_density(fine, rng)};
      const LevelSetDecomposition lsd = level_set_decomposition(fam, g);  // throws on failure
      for (int parity = 0; parity < 2; ++parity) {
        std::vector<int> paint(static_cast<std::size_t>(fine.cell_count()), 0);
        for (const LevelSetStage& st : lsd.stages) {
          if (((st.l % 2) + 2) % 2 != parity) continue;
          for (const auto& e : st.e_sets)
            for (std::size_t c = 0; c < e.size(); ++c)
              if (e[c]) CHECK(++paint[c] == 1);
        }
      }
    }
  }
}

TEST_CASE("rough-kernel lower estimate") {
  SUBCASE("frozen oracle at eps = 1, x = 2") {
    // Adaptive Simpson reference, frozen after convergence to 1e-8.
    const double frozen = 0.32420025239865546;
    const double reference = simpson_reference_eps1(2.0);
    CHECK(reference == doctest::Approx(frozen).epsilon(1e-6));

    // The certified estimate never exceeds the true value and gets close on a
    // refined mesh.
    const double coarse = riesz_like_apply(1.0, 2.0);
    CHECK(coarse > 0.0);
    CHECK(coarse <= frozen * (1.0 + 1e-9));
    RieszMesh fine;
    fine.geo_levels = 21;
    fine.subdiv = 48;
    const double tight = riesz_like_apply(1.0, 2.0, fine);
    CHECK(tight <= frozen * (1.0 + 1e-9));
    CHECK(tight >= 0.95 * frozen);
    CHECK(tight >= coarse);
  }

  SUBCASE("positivity and monotonicity in x") {
    XorShift64Star rng(103);
    for (int trial = 0; trial < 10; ++trial) {
      const double eps = rng.uniform(0.05, 1.0);
      const double x = 1.0 + rng.uniform(0.01, 4.0);
      CHECK(riesz_like_apply(eps, x) > 0.0);
    }
    for (double eps : {0.5, 0.125}) {
      double prev = riesz_like_apply(eps, 2.0);
      for (double x : {2.5, 3.0, 3.5, 4.0, 5.0}) {
        const double cur = riesz_like_apply(eps, x);
        CHECK(cur <= prev * (1.0 + 1e-12));
        prev = cur;
      }
    }
  }

  SUBCASE("domain errors") {
    CHECK_THROWS_AS(riesz_like_apply(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(riesz_like_apply(0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(riesz_like_apply(0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(riesz_like_apply(1.5, 2.0), std::domain_error);
  }

  SUBCASE("functional is positive and increasing as eps shrinks") {
    const double a = riesz_lower_functional(0.125, 1.1, 1.2);
    const double b = riesz_lower_functional(0.0625, 1.1, 1.2);
    CHECK(a > 0.0);
    CHECK(b > a);
  }
}
