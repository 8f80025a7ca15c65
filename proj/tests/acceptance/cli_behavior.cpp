// Exit-code and artifact contracts of the command-line tool:
//   0 = pass, 1 = a checked property failed, 2 = usage or config error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& args) {
  const std::string cmd = std::string(WORKBENCH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  int rows = 0;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

}  // namespace

int main() {
  const fs::path base = fs::temp_directory_path() / "workbench_cli_behavior";
  std::error_code ec;
  fs::remove_all(base, ec);
  fs::create_directories(base);

  const std::string small = R"({
    "n": 1, "L": 5, "exponents": [2.2, 2.2], "seed": 7,
    "instances": {"carleson": 4, "transform": 3, "weak_maximal": 4,
                   "sparse": 4, "decompositions": 3, "reports": 4},
    "testing_pairs": 4
  })";
  const fs::path good = write_config(base, "good.json", small);
  const fs::path bad_json = write_config(base, "bad.json", "{ not json");
  const fs::path bad_L = write_config(base, "bad_L.json", R"({"n":1,"L":0})");
  const fs::path bad_p = write_config(base, "bad_p.json", R"({"n":1,"L":4,"exponents":[1.5,1.5]})");

  expect(run("") == 2, "no arguments is a usage error");
  expect(run("--config " + good.string() + " frobnicate") == 2, "unknown subcommand");
  expect(run("--config " + base.string() + "/missing.json check") == 2, "missing config file");
  expect(run("--config " + bad_json.string() + " check") == 2, "malformed JSON");
  expect(run("--config " + bad_L.string() + " check") == 2, "L = 0 fails validation");
  expect(run("--config " + bad_p.string() + " check") == 2, "derived p <= 1 rejected");
  expect(run("--config " + good.string() + " --out " + (base / "nope").string() + " check") == 2,
         "missing output directory");

  const fs::path out = base / "out";
  fs::create_directories(out);
  expect(run("--config " + good.string() + " --out " + out.string() + " check") == 0,
         "small check run passes");
  expect(fs::exists(out / "check_summary.json"), "check writes its JSON summary");

  expect(run("--config " + good.string() + " --out " + out.string() +
             " --only carleson check") == 0,
         "single check group runs");
  const std::string summary = slurp(out / "check_summary.json");
  expect(summary.find("\"carleson\"") != std::string::npos &&
             summary.find("\"transform\"") == std::string::npos,
         "only the selected group is in the summary");
  expect(run("--config " + good.string() + " --out " + out.string() +
             " --only no_such_group check") == 2,
         "unknown check group is a usage error");

  expect(run("--config " + good.string() + " --out " + out.string() + " --seeds 1 report") == 0,
         "report with one seed passes");
  expect(count_data_rows(out / "report.csv") == 3,
         "one seed gives exactly one row per report kind");

  // The sweep's eps ladder and slope gates come from the config defaults; the
  // exterior-regime slope clause is red by design, hence exit 1.
  expect(run("--config " + good.string() + " --out " + out.string() + " sweep") == 1,
         "sweep exits 1 while a slope clause fails");
  {
    std::ifstream in(out / "sweep.csv");
    std::string header;
    std::getline(in, header);
    expect(header == "eps,apbar,ainf_sigma1,ainf_sigma2,ainf_v,norm_f1,norm_f2,r1_lower",
           "sweep CSV header is pinned");
  }
  expect(count_data_rows(out / "sweep.csv") == 8, "default ladder yields 8 sweep rows");

  if (g_failures) std::printf("%d CLI behavior check(s) failed\n", g_failures);
  return g_failures;
}
