#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "workbench/analysis.hpp"

// Run configuration for the CLI: a single JSON file validated at load, plus
// the deterministic text formatting used by every artifact the tool writes.

namespace workbench {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 1;
  int L = 8;
  std::vector<double> exponents{2.2, 2.2};
  std::uint64_t seed = 12345;
  std::vector<double> eps;  // defaults to the ladder 2^-3 .. 2^-10
  int family_depth = 4;
  double cz_ratio = 8.0;
  int testing_pairs = 8;
  int carleson_instances = 200;
  int transform_instances = 50;
  int weak_maximal_instances = 200;
  int sparse_instances = 200;
  int decomposition_instances = 100;
  int report_instances = 200;
  int x_panels = 32;
  RieszMesh mesh{};

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  ModelConfig model_config() const;        // throws ConfigError on bad n/L
  ExponentSystem exponent_system() const;  // requires p > 1
  SuiteOptions suite_options(const std::vector<std::string>& only, int seeds_override) const;
  SweepOptions sweep_options() const;
};

}  // namespace workbench
