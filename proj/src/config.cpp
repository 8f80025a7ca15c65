#include "workbench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace workbench {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("config: bad value for '") + key + "'");
    }
  }
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig c;
  read_field(j, "n", c.n);
  read_field(j, "L", c.L);
  read_field(j, "exponents", c.exponents);
  read_field(j, "seed", c.seed);
  read_field(j, "eps", c.eps);
  if (j.contains("family")) {
    const auto& f = j.at("family");
    read_field(f, "depth", c.family_depth);
    read_field(f, "cz_ratio", c.cz_ratio);
  }
  if (j.contains("instances")) {
    const auto& inst = j.at("instances");
    read_field(inst, "carleson", c.carleson_instances);
    read_field(inst, "transform", c.transform_instances);
    read_field(inst, "weak_maximal", c.weak_maximal_instances);
    read_field(inst, "sparse", c.sparse_instances);
    read_field(inst, "decompositions", c.decomposition_instances);
    read_field(inst, "reports", c.report_instances);
  }
  read_field(j, "testing_pairs", c.testing_pairs);
  read_field(j, "x_panels", c.x_panels);
  if (j.contains("mesh")) {
    const auto& m = j.at("mesh");
    read_field(m, "geo_levels", c.mesh.geo_levels);
    read_field(m, "subdiv", c.mesh.subdiv);
  }
  if (c.eps.empty())
    for (int k = 3; k <= 10; ++k) c.eps.push_back(std::ldexp(1.0, -k));

  c.model_config();
  c.exponent_system();
  if (c.family_depth < 0 || c.testing_pairs < 0 || c.x_panels < 1)
    throw ConfigError("config: negative or zero sizes");
  for (int v : {c.carleson_instances, c.transform_instances, c.weak_maximal_instances,
                c.sparse_instances, c.decomposition_instances, c.report_instances})
    if (v < 1) throw ConfigError("config: instance counts must be >= 1");
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ModelConfig RunConfig::model_config() const {
  try {
    return ModelConfig(n, L);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExponentSystem RunConfig::exponent_system() const {
  try {
    ExponentSystem e(exponents);
    if (!(e.p > 1.0)) throw ConfigError("config: derived p must exceed 1");
    return e;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SuiteOptions RunConfig::suite_options(const std::vector<std::string>& only,
                                      int seeds_override) const {
  SuiteOptions o;
  o.cfg = model_config();
  o.exps = exponent_system();
  o.seed = seed;
  o.carleson_instances = seeds_override > 0 ? seeds_override : carleson_instances;
  o.transform_instances = seeds_override > 0 ? seeds_override : transform_instances;
  o.weak_maximal_instances = seeds_override > 0 ? seeds_override : weak_maximal_instances;
  o.sparse_instances = seeds_override > 0 ? seeds_override : sparse_instances;
  o.decomposition_instances = seeds_override > 0 ? seeds_override : decomposition_instances;
  o.report_instances = seeds_override > 0 ? seeds_override : report_instances;
  o.family_depth = family_depth;
  o.cz_ratio = cz_ratio;
  o.testing_pairs = testing_pairs;
  o.only = only;
  return o;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.cfg = model_config();
  o.exps = exponent_system();
  o.eps = eps;
  o.mesh = mesh;
  o.x_panels = x_panels;
  return o;
}

}  // namespace workbench
