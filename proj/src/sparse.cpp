#include "workbench/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "workbench/operators.hpp"

namespace workbench {

std::int64_t SparseFamily::cube_count() const {
  std::int64_t n = 0;
  for (const auto& s : stages) n += static_cast<std::int64_t>(s.size());
  return n;
}

std::vector<Cube> SparseFamily::all_cubes() const {
  std::vector<Cube> out;
  for (const auto& s : stages) out.insert(out.end(), s.begin(), s.end());
  return out;
}

SparseCheck verify_sparse(const ModelConfig& cfg, const SparseFamily& fam) {
  for (const auto& stage : fam.stages)
    for (const Cube& q : stage)
      if (q.grid != fam.grid)
        return SparseCheck{false, 4, q, "cube from a different grid"};

  const std::size_t cells = static_cast<std::size_t>(cfg.cell_count());
  std::vector<std::vector<std::uint8_t>> masks;
  masks.reserve(fam.stages.size());
  for (std::size_t k = 0; k < fam.stages.size(); ++k) {
    std::vector<std::uint8_t> mask(cells, 0);
    for (const Cube& q : fam.stages[k]) {
      bool clash = false;
      for_each_cell(cfg, q, [&](std::int64_t c) {
        if (mask[static_cast<std::size_t>(c)]) clash = true;
        mask[static_cast<std::size_t>(c)] = 1;
      });
      if (clash)
        return SparseCheck{false, 1, q, "stage " + std::to_string(k) + " cubes overlap"};
    }
    masks.push_back(std::move(mask));
  }

  for (std::size_t k = 0; k + 1 < masks.size(); ++k) {
    for (std::size_t c = 0; c < cells; ++c) {
      if (masks[k + 1][c] && !masks[k][c]) {
        // Attribute the violation to the first next-stage cube sticking out.
        for (const Cube& q : fam.stages[k + 1]) {
          bool out = false;
          for_each_cell(cfg, q, [&](std::int64_t cc) {
            if (!masks[k][static_cast<std::size_t>(cc)]) out = true;
          });
          if (out)
            return SparseCheck{false, 2, q,
                               "stage " + std::to_string(k + 1) + " not nested in stage " +
                                   std::to_string(k)};
        }
        return SparseCheck{false, 2, std::nullopt, "nesting violated"};
      }
    }
  }

  for (std::size_t k = 0; k + 1 < masks.size(); ++k) {
    for (const Cube& q : fam.stages[k]) {
      std::int64_t covered = 0;
      for_each_cell(cfg, q, [&](std::int64_t c) {
        covered += masks[k + 1][static_cast<std::size_t>(c)];
      });
      if (2 * covered > cube_cell_count(cfg, q))
        return SparseCheck{false, 3, q,
                           "stage " + std::to_string(k + 1) + " covers more than half"};
    }
  }
  return SparseCheck{};
}

std::vector<std::uint8_t> sparse_e_set(const ModelConfig& cfg, const SparseFamily& fam,
                                       int stage, const Cube& q) {
  std::vector<std::uint8_t> e(static_cast<std::size_t>(cfg.cell_count()), 0);
  for_each_cell(cfg, q, [&](std::int64_t c) { e[static_cast<std::size_t>(c)] = 1; });
  const std::size_t next = static_cast<std::size_t>(stage) + 1;
  if (next < fam.stages.size()) {
    for (const Cube& r : fam.stages[next])
      for_each_cell(cfg, r, [&](std::int64_t c) { e[static_cast<std::size_t>(c)] = 0; });
  }
  return e;
}

std::int64_t sparse_e_cell_count(const ModelConfig& cfg, const SparseFamily& fam, int stage,
                                 const Cube& q) {
  const auto e = sparse_e_set(cfg, fam, stage, q);
  std::int64_t n = 0;
  for (std::uint8_t b : e) n += b;
  return n;
}

SparseFamily random_sparse(const ModelConfig& cfg, GridId grid, std::uint64_t seed, int depth) {
  return random_sparse_in(cfg, root_cube(grid), seed, depth);
}

SparseFamily random_sparse_in(const ModelConfig& cfg, const Cube& top, std::uint64_t seed,
                              int depth) {
  if (depth < 0 || top.level > cfg.L) throw std::out_of_range("random_sparse: bad depth or top");
  XorShift64Star rng(seed);
  SparseFamily fam{top.grid, {{top}}};
  for (int s = 0; s < depth; ++s) {
    std::vector<Cube> next;
    for (const Cube& q : fam.stages[static_cast<std::size_t>(s)]) {
      const int room = cfg.L - q.level;
      if (room == 0) continue;
      const int step = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(2, room))));
      const std::int64_t per_axis = std::int64_t{1} << step;
      const std::int64_t total = cfg.n == 1 ? per_axis : per_axis * per_axis;
      const std::int64_t cap = total / 2;  // at most half of q by measure
      const std::int64_t take = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cap + 1)));
      if (take == 0) continue;
      std::vector<std::int64_t> locals(static_cast<std::size_t>(total));
      for (std::int64_t t = 0; t < total; ++t) locals[static_cast<std::size_t>(t)] = t;
      for (std::int64_t t = 0; t < take; ++t) {
        const std::int64_t j =
            t + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total - t)));
        std::swap(locals[static_cast<std::size_t>(t)], locals[static_cast<std::size_t>(j)]);
      }
      locals.resize(static_cast<std::size_t>(take));
      std::sort(locals.begin(), locals.end());
      for (std::int64_t t : locals) {
        Cube c{q.grid, q.level + step, {0, 0}};
        if (cfg.n == 1) {
          c.index[0] = (q.index[0] << step) + t;
        } else {
          c.index[0] = (q.index[0] << step) + t / per_axis;
          c.index[1] = (q.index[1] << step) + t % per_axis;
        }
        next.push_back(c);
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    fam.stages.push_back(std::move(next));
  }
  return fam;
}

namespace {

void maximal_cubes_in(const ModelConfig& cfg, const std::vector<std::uint8_t>& mask,
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
  for (const Cube& c : children(cfg, q)) maximal_cubes_in(cfg, mask, c, out);
}

}  // namespace

SparseFamily cz_sparse_from_functions(const std::vector<CellFunction>& g, GridId grid,
                                      double ratio_a) {
  if (g.empty()) throw std::invalid_argument("cz_sparse_from_functions: no functions");
  if (!(ratio_a > 1.0)) throw std::invalid_argument("cz_sparse_from_functions: ratio must be > 1");
  const ModelConfig& cfg = g.front().config();
  const CellFunction maximal = dyadic_maximal(g, grid);

  // Classify each positive cell value into the unique band (a^l, a^(l+1)].
  auto band_of = [&](double v) {
    int l = static_cast<int>(std::floor(std::log(v) / std::log(ratio_a)));
    while (std::pow(ratio_a, l) >= v) --l;
    while (std::pow(ratio_a, l + 1) < v) ++l;
    return l;
  };
  std::vector<int> attained;
  for (std::int64_t c = 0; c < maximal.size(); ++c)
    if (maximal[c] > 0.0) attained.push_back(band_of(maximal[c]));
  std::sort(attained.begin(), attained.end());
  attained.erase(std::unique(attained.begin(), attained.end()), attained.end());

  SparseFamily fam{grid, {}};
  for (int l : attained) {
    const double thr = std::pow(ratio_a, l);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(cfg.cell_count()), 0);
    for (std::int64_t c = 0; c < maximal.size(); ++c)
      if (maximal[c] > thr) mask[static_cast<std::size_t>(c)] = 1;
    std::vector<Cube> stage;
    maximal_cubes_in(cfg, mask, root_cube(grid), stage);
    std::sort(stage.begin(), stage.end());
    if (!stage.empty()) fam.stages.push_back(std::move(stage));
  }

  // On the torus the coarsest stage is capped at the root cube, which has no
  // parent to control it; leading stages that the next stage covers by more
  // than half are dropped. Deeper pairs are controlled by parent maximality.
  while (fam.stages.size() >= 2) {
    std::vector<std::uint8_t> next(static_cast<std::size_t>(cfg.cell_count()), 0);
    for (const Cube& r : fam.stages[1])
      for_each_cell(cfg, r, [&](std::int64_t c) { next[static_cast<std::size_t>(c)] = 1; });
    bool ok = true;
    for (const Cube& q : fam.stages[0]) {
      std::int64_t covered = 0;
      for_each_cell(cfg, q, [&](std::int64_t c) { covered += next[static_cast<std::size_t>(c)]; });
      if (2 * covered > cube_cell_count(cfg, q)) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    fam.stages.erase(fam.stages.begin());
  }

  const SparseCheck check = verify_sparse(cfg, fam);
  if (!check.ok)
    throw SparsenessError("cz_sparse_from_functions: candidate family is not sparse (" +
                              check.detail + ")",
                          check);
  return fam;
}

SparseFamily restage_subfamily(const ModelConfig& cfg, const SparseFamily& fam,
                               const std::vector<Cube>& subset) {
  (void)cfg;
  std::vector<std::vector<Cube>> stages;
  for (const Cube& q : subset) {
    int depth = 0;
    for (const Cube& r : subset)
      if (r != q && contains(r, q)) ++depth;
    if (static_cast<std::size_t>(depth) >= stages.size())
      stages.resize(static_cast<std::size_t>(depth) + 1);
    stages[static_cast<std::size_t>(depth)].push_back(q);
  }
  for (auto& s : stages) std::sort(s.begin(), s.end());
  return SparseFamily{fam.grid, std::move(stages)};
}

std::string sparse_to_json(const SparseFamily& fam, const ModelConfig& cfg) {
  nlohmann::ordered_json j;
  j["grid"]["shift"] = cfg.n == 1 ? std::vector<int>{fam.grid.shift[0]}
                                  : std::vector<int>{fam.grid.shift[0], fam.grid.shift[1]};
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& stage : fam.stages) {
    nlohmann::ordered_json js = nlohmann::ordered_json::array();
    for (const Cube& q : stage) {
      nlohmann::ordered_json jq;
      jq["k"] = q.level;
      jq["j"] = cfg.n == 1 ? std::vector<std::int64_t>{q.index[0]}
                           : std::vector<std::int64_t>{q.index[0], q.index[1]};
      js.push_back(jq);
    }
    j["stages"].push_back(js);
  }
  return j.dump();
}

SparseFamily sparse_from_json(const std::string& text, const ModelConfig& cfg) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SparseFamily fam;
  const auto& shift = j.at("grid").at("shift");
  fam.grid.shift[0] = shift.at(0).get<int>();
  fam.grid.shift[1] = cfg.n == 2 ? shift.at(1).get<int>() : 0;
  for (const auto& js : j.at("stages")) {
    std::vector<Cube> stage;
    for (const auto& jq : js) {
      Cube q{fam.grid, jq.at("k").get<int>(), {0, 0}};
      q.index[0] = jq.at("j").at(0).get<std::int64_t>();
      if (cfg.n == 2) q.index[1] = jq.at("j").at(1).get<std::int64_t>();
      stage.push_back(q);
    }
    fam.stages.push_back(std::move(stage));
  }
  return fam;
}

}  // namespace workbench
