#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "workbench/config.hpp"

// CLI entry point. Subcommands:
//   check  - run the exact-lemma suite, write a JSON summary
//   sweep  - run the power-weight sweep, write a CSV with a slope footer
//   report - run the randomized strong/weak/testing suite, write a CSV
// Exit codes: 0 pass, 1 a checked property failed, 2 usage/config error.
// All outputs are byte-stable for a fixed config (shortest round-trip float
// formatting, '\n' line endings, no timestamps).

namespace {

using workbench::CheckResult;
using workbench::format_double;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::filesystem::path resolve_out_dir(const std::string& out, bool& ok) {
  std::filesystem::path dir = out.empty() ? "." : out;
  ok = std::filesystem::is_directory(dir);
  return dir;
}

void print_check_line(const CheckResult& c) {
  std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " value=" << format_double(c.value);
  if (c.bound != 0.0) std::cout << " bound=" << format_double(c.bound);
  std::cout << " instances=" << c.instances << " (" << c.note << ")\n";
}

nlohmann::ordered_json check_to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["check_name"] = c.name;
  j["status"] = c.pass ? "pass" : "fail";
  j["value"] = c.value;
  j["bound"] = c.bound;
  j["slack"] = c.slack;
  j["instances"] = c.instances;
  j["note"] = c.note;
  return j;
}

int run_check(const workbench::RunConfig& cfg, const std::vector<std::string>& only,
              int seeds_override, const std::string& out) {
  bool dir_ok = false;
  const std::filesystem::path dir = resolve_out_dir(out, dir_ok);
  if (!dir_ok) {
    std::cerr << "error: output directory '" << dir.string() << "' does not exist\n";
    return kExitUsage;
  }
  const std::vector<CheckResult> checks =
      workbench::lemma_suite(cfg.suite_options(only, seeds_override));
  if (checks.empty()) {
    std::cerr << "error: no check group matches the --only filter\n";
    return kExitUsage;
  }
  bool all = true;
  nlohmann::ordered_json summary;
  summary["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    print_check_line(c);
    summary["checks"].push_back(check_to_json(c));
    all &= c.pass;
  }
  summary["all_pass"] = all;
  std::ofstream file(dir / "check_summary.json", std::ios::binary);
  file << summary.dump(2) << "\n";
  return all ? kExitPass : kExitCheckFailed;
}

int run_sweep(const workbench::RunConfig& cfg, const std::string& out) {
  bool dir_ok = false;
  const std::filesystem::path dir = resolve_out_dir(out, dir_ok);
  if (!dir_ok) {
    std::cerr << "error: output directory '" << dir.string() << "' does not exist\n";
    return kExitUsage;
  }
  const workbench::SweepResult result = workbench::sharpness_sweep(cfg.sweep_options());
  const workbench::SweepVerdict verdict =
      workbench::evaluate_sweep(result, cfg.exponent_system());

  std::ofstream file(dir / "sweep.csv", std::ios::binary);
  file << "eps,apbar,ainf_sigma1,ainf_sigma2,ainf_v,norm_f1,norm_f2,r1_lower\n";
  for (const workbench::SweepRow& r : result.rows) {
    file << format_double(r.eps) << ',' << format_double(r.apbar) << ','
         << format_double(r.ainf_sigma1) << ',' << format_double(r.ainf_sigma2) << ','
         << format_double(r.ainf_v) << ',' << format_double(r.norm_f1) << ','
         << format_double(r.norm_f2) << ',' << format_double(r.r1_lower) << "\n";
  }
  const auto residual_of = [&](const std::string& name) {
    if (name == "apbar") return result.apbar.max_abs_residual;
    if (name == "norm_product") return result.norm_product.max_abs_residual;
    if (name == "r1_lower") return result.r1.max_abs_residual;
    if (name == "ainf_sigma1") return result.ainf_sigma1.max_abs_residual;
    return result.ainf_sigma2.max_abs_residual;
  };
  file << "# slope,name,value,target,tolerance,residual,status\n";
  for (const auto& c : verdict.clauses) {
    file << "# slope," << c.name << ',' << format_double(c.slope) << ','
         << format_double(c.target) << ',' << format_double(c.tolerance) << ','
         << format_double(residual_of(c.name)) << ',' << (c.pass ? "pass" : "fail") << "\n";
  }
  for (const auto& c : verdict.clauses) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << "slope(" << c.name
              << ")=" << format_double(c.slope) << " target=" << format_double(c.target)
              << " tol=" << format_double(c.tolerance)
              << " residual=" << format_double(residual_of(c.name)) << "\n";
  }
  if (!verdict.all_pass) {
    std::cout << "failing slopes:";
    for (const auto& c : verdict.clauses)
      if (!c.pass) std::cout << ' ' << c.name;
    std::cout << "\n";
  }
  return verdict.all_pass ? kExitPass : kExitCheckFailed;
}

int run_report(const workbench::RunConfig& cfg, int seeds_override, const std::string& out) {
  bool dir_ok = false;
  const std::filesystem::path dir = resolve_out_dir(out, dir_ok);
  if (!dir_ok) {
    std::cerr << "error: output directory '" << dir.string() << "' does not exist\n";
    return kExitUsage;
  }
  const workbench::ReportSuiteResult result =
      workbench::report_suite(cfg.suite_options({}, seeds_override));

  std::ofstream file(dir / "report.csv", std::ios::binary);
  file << "kind,seed,lhs,rhs,ratio,apbar,ainf_v,ainf_s1,ainf_s2,norm1,norm2\n";
  for (const workbench::ReportRow& r : result.rows) {
    file << r.kind << ',' << r.seed << ',' << format_double(r.lhs) << ','
         << format_double(r.rhs) << ',' << format_double(r.ratio) << ','
         << format_double(r.apbar) << ',' << format_double(r.ainf_v) << ','
         << format_double(r.ainf_s1) << ',' << format_double(r.ainf_s2) << ','
         << format_double(r.norm1) << ',' << format_double(r.norm2) << "\n";
  }
  file << "# summary,name,value,bound,status\n";
  bool all = true;
  for (const CheckResult& c : result.checks) {
    file << "# summary," << c.name << ',' << format_double(c.value) << ','
         << format_double(c.bound) << ',' << (c.pass ? "pass" : "fail") << "\n";
    print_check_line(c);
    all &= c.pass;
  }
  return all ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite dyadic workbench for multilinear weighted inequalities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int seeds_override = 0;
  std::vector<std::string> only;

  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory (must exist)");
  app.add_option("--seeds", seeds_override, "override every instance count");
  app.add_option("--only", only, "restrict check groups (check subcommand)");

  CLI::App* cmd_check = app.add_subcommand("check", "run the exact-lemma suite");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run the power-weight sweep");
  CLI::App* cmd_report = app.add_subcommand("report", "run the randomized report suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  workbench::RunConfig cfg;
  try {
    cfg = workbench::RunConfig::from_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (cmd_check->parsed()) return run_check(cfg, only, seeds_override, out_dir);
    if (cmd_sweep->parsed()) return run_sweep(cfg, out_dir);
    if (cmd_report->parsed()) return run_report(cfg, seeds_override, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
