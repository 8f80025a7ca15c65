#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "workbench/dyadic.hpp"
#include "workbench/rng.hpp"

using namespace workbench;

namespace {

// Cell extent as a set, independent of for_each_cell's iteration order.
std::set<std::int64_t> cells_of(const ModelConfig& cfg, const Cube& q) {
  std::set<std::int64_t> out;
  for_each_cell(cfg, q, [&](std::int64_t c) { out.insert(c); });
  return out;
}

}  // namespace

TEST_CASE("model config invariants") {
  const ModelConfig cfg(1, 2);
  CHECK(cfg.cells_per_axis() == 12);
  CHECK(cfg.cell_count() == 12);
  for (int k = 0; k <= cfg.L; ++k) CHECK(cfg.cells_per_axis() % (3 << k) == 0);
  CHECK_THROWS_AS(ModelConfig(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig(1, 13), std::invalid_argument);
}

TEST_CASE("cubes_at_level partitions and matches endpoints") {
  const ModelConfig cfg(1, 2);  // N = 12

  SUBCASE("base grid level 1: [0,1/2) and [1/2,1)") {
    const auto cubes = cubes_at_level(cfg, GridId{}, 1);
    REQUIRE(cubes.size() == 2);
    CHECK(cells_of(cfg, cubes[0]) == std::set<std::int64_t>{0, 1, 2, 3, 4, 5});
    CHECK(cells_of(cfg, cubes[1]) == std::set<std::int64_t>{6, 7, 8, 9, 10, 11});
  }

  SUBCASE("base grid level 0: the whole torus") {
    const auto cubes = cubes_at_level(cfg, GridId{}, 0);
    REQUIRE(cubes.size() == 1);
    CHECK(cells_of(cfg, cubes[0]).size() == 12);
  }

  SUBCASE("shift-1 level 1: left endpoints 1/3 and 5/6, one cube wraps") {
    // Translate grid: level-k cubes start at j*2^-k + 1/3.
    const auto cubes = cubes_at_level(cfg, GridId{{1, 0}}, 1);
    REQUIRE(cubes.size() == 2);
    CHECK(cells_of(cfg, cubes[0]) == std::set<std::int64_t>{4, 5, 6, 7, 8, 9});
    CHECK(cells_of(cfg, cubes[1]) == std::set<std::int64_t>{10, 11, 0, 1, 2, 3});
    CHECK(!cube_wraps(cfg, cubes[0]));
    CHECK(cube_wraps(cfg, cubes[1]));
  }

  SUBCASE("every grid and level tiles the torus") {
    for (const GridId& g : all_grids(cfg)) {
      for (int k = 0; k <= cfg.L; ++k) {
        std::vector<int> cover(static_cast<std::size_t>(cfg.cell_count()), 0);
        double total = 0.0;
        for (const Cube& q : cubes_at_level(cfg, g, k)) {
          total += measure(cfg, q);
          for_each_cell(cfg, q, [&](std::int64_t c) { ++cover[static_cast<std::size_t>(c)]; });
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
        for (int c : cover) CHECK(c == 1);
      }
    }
  }

  CHECK_THROWS_AS(cubes_at_level(cfg, GridId{}, 3), std::out_of_range);
  CHECK_THROWS_AS(cubes_at_level(cfg, GridId{}, -1), std::out_of_range);
}

TEST_CASE("children halve the parent inside the same grid") {
  const ModelConfig cfg(1, 2);

  SUBCASE("base grid") {
    const Cube root = root_cube(GridId{});
    const auto kids = children(cfg, root);
    REQUIRE(kids.size() == 2);
    CHECK(cells_of(cfg, kids[0]) == std::set<std::int64_t>{0, 1, 2, 3, 4, 5});
    const Cube right = kids[1];
    const auto grandkids = children(cfg, right);
    CHECK(cells_of(cfg, grandkids[0]) == std::set<std::int64_t>{6, 7, 8});
    CHECK(cells_of(cfg, grandkids[1]) == std::set<std::int64_t>{9, 10, 11});
  }

  SUBCASE("shift-1 root splits at 1/3 + multiples of 1/2") {
    const Cube root = root_cube(GridId{{1, 0}});
    const auto kids = children(cfg, root);
    REQUIRE(kids.size() == 2);
    // Halves [1/3, 5/6) and [5/6, 4/3): the same cubes as cubes_at_level(k=1).
    CHECK(cells_of(cfg, kids[0]) == std::set<std::int64_t>{4, 5, 6, 7, 8, 9});
    CHECK(cells_of(cfg, kids[1]) == std::set<std::int64_t>{10, 11, 0, 1, 2, 3});
    CHECK(kids == cubes_at_level(cfg, GridId{{1, 0}}, 1));
  }

  SUBCASE("union of children is the parent, disjoint") {
    XorShift64Star rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      GridId g{{static_cast<int>(rng.below(3)), 0}};
      const int k = static_cast<int>(rng.below(2));
      Cube q{g, k, {static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k)), 0}};
      std::set<std::int64_t> all;
      std::int64_t count = 0;
      for (const Cube& c : children(cfg, q)) {
        CHECK(c.grid == g);
        CHECK(c.level == k + 1);
        const auto cells = cells_of(cfg, c);
        count += static_cast<std::int64_t>(cells.size());
        all.insert(cells.begin(), cells.end());
      }
      CHECK(all == cells_of(cfg, q));
      CHECK(count == cube_cell_count(cfg, q));
    }
  }

  const Cube leaf{GridId{}, 2, {0, 0}};
  CHECK_THROWS_AS(children(cfg, leaf), std::out_of_range);
}

TEST_CASE("nesting trichotomy within one grid") {
  const ModelConfig cfg(1, 3);
  XorShift64Star rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const GridId g{{static_cast<int>(rng.below(3)), 0}};
    auto rand_cube = [&]() {
      const int k = static_cast<int>(rng.below(4));
      return Cube{g, k, {static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k)), 0}};
    };
    const Cube a = rand_cube();
    const Cube b = rand_cube();
    const auto ca = cells_of(cfg, a);
    const auto cb = cells_of(cfg, b);
    std::vector<std::int64_t> common;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(common));
    const bool disjoint = common.empty();
    const bool a_in_b = std::includes(cb.begin(), cb.end(), ca.begin(), ca.end());
    const bool b_in_a = std::includes(ca.begin(), ca.end(), cb.begin(), cb.end());
    CHECK((disjoint || a_in_b || b_in_a));
    CHECK(contains(a, b) == b_in_a);
    CHECK(contains(b, a) == a_in_b);
  }
}

TEST_CASE("cube geometry helpers") {
  const ModelConfig cfg(2, 2);  // N = 12 per axis
  const Cube q{GridId{{2, 1}}, 1, {1, 0}};
  CHECK(measure(cfg, q) == 0.25);
  CHECK(cube_cell_count(cfg, q) == 36);
  CHECK(cube_side_cells(cfg, q) == 6);
  // start = j*6 + s*4 per axis
  CHECK(cube_start_cell(cfg, q, 0) == 14);
  CHECK(cube_start_cell(cfg, q, 1) == 4);

  XorShift64Star rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const GridId g{{static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3))}};
    const int k = static_cast<int>(rng.below(3));
    const Cube c{g, k,
                 {static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k)),
                  static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k))}};
    for_each_cell(cfg, c, [&](std::int64_t cell) {
      CHECK(cube_containing_cell(cfg, g, k, cell) == c);
    });
  }
}

TEST_CASE("cube_integral: examples, additivity, determinism") {
  const ModelConfig cfg(1, 1);  // N = 6

  SUBCASE("constant and zero functions") {
    const CellFunction one(cfg, 1.0);
    const CellFunction zero(cfg, 0.0);
    for (int k = 0; k <= 1; ++k) {
      for (const Cube& q : cubes_at_level(cfg, GridId{}, k)) {
        CHECK(cube_integral(one, q) == doctest::Approx(measure(cfg, q)).epsilon(1e-15));
        CHECK(cube_integral(zero, q) == 0.0);
      }
    }
  }

  SUBCASE("4 on the left half, 0 on the right") {
    const CellFunction f(cfg, {4, 4, 4, 0, 0, 0});
    CHECK(cube_integral(f, root_cube(GridId{})) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cube_average(f, Cube{GridId{}, 1, {0, 0}}) == doctest::Approx(4.0));
  }

  SUBCASE("additivity over children and bit-identical repeats") {
    const ModelConfig big(1, 4);
    XorShift64Star rng(5);
    std::vector<double> vals(static_cast<std::size_t>(big.cell_count()));
    for (double& v : vals) v = rng.uniform(0.0, 3.0);
    const CellFunction f(big, vals);
    for (const GridId& g : all_grids(big)) {
      for (int k = 0; k < big.L; ++k) {
        for (const Cube& q : cubes_at_level(big, g, k)) {
          double sum = 0.0;
          for (const Cube& c : children(big, q)) sum += cube_integral(f, c);
          const double direct = cube_integral(f, q);
          CHECK(std::abs(sum - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
          CHECK(cube_integral(f, q) == direct);  // repeat is bit-identical
        }
      }
    }
  }

  SUBCASE("level_integrals matches cube_integral bit for bit") {
    const ModelConfig big(2, 3);
    XorShift64Star rng(9);
    std::vector<double> vals(static_cast<std::size_t>(big.cell_count()));
    for (double& v : vals) v = rng.uniform(0.0, 2.0);
    const CellFunction f(big, vals);
    for (const GridId& g : all_grids(big)) {
      for (int k = 0; k <= big.L; ++k) {
        const auto ints = level_integrals(f, g, k);
        for (const Cube& q : cubes_at_level(big, g, k)) {
          CHECK(ints[static_cast<std::size_t>(cube_linear_index(big, q))] ==
                cube_integral(f, q));
        }
      }
    }
  }
}

TEST_CASE("cell function validation") {
  const ModelConfig cfg(1, 1);
  CHECK_THROWS_AS(CellFunction(cfg, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(CellFunction(cfg, {1, 2, 3, 4, 5, -1}), std::domain_error);
  const CellFunction f(cfg, {1, 2, 3, 4, 5, 6});
  CHECK(f.integral() == doctest::Approx(3.5).epsilon(1e-15));
}
