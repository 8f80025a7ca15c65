#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "workbench/constants.hpp"
#include "workbench/decompositions.hpp"
#include "workbench/norms.hpp"
#include "workbench/operators.hpp"
#include "workbench/sparse.hpp"

// Experiment harness: inequality reports for the strong and weak mixed-type
// bounds with the sparse operator standing in for the singular operator,
// testing-constant measurements, the power-weight sharpness sweep with
// fitted log-log slopes, and the seeded suites behind the CLI and the
// acceptance tests.

namespace workbench {

// Reads WORKBENCH_THREADS (0 or unset = hardware concurrency).
int thread_budget();
// Runs task(0..count-1); tasks must be independent and write disjoint slots,
// so results do not depend on the thread count.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& task,
                  int threads = 0);

// ---- mixed-type inequality reports ----

struct InequalityReport {
  enum class Kind { strong, weak };
  Kind kind = Kind::strong;
  double lhs = 0.0;
  double apbar = 1.0;
  double ainfty_v = 1.0;
  std::vector<double> ainfty_sigma;  // per slot
  std::vector<double> norm_f;        // ||f_i||_{L^{p_i}(sigma_i)}
  std::vector<double> norm_fsigma;   // ||f_i sigma_i||_{L^{p_i}(w_i)} (same numbers)
  double rhs = 0.0;
  double ratio = 0.0;  // lhs/rhs, 0 when lhs == 0
  std::uint64_t seed = 0;
  std::string family_id;  // grid shift, stage count, cube count

  // Re-derives rhs from the stored factors (self-consistency check).
  double reassemble_rhs(const ExponentSystem& e) const;
};

// lhs = || A_fam(f_1 sigma_1, ..., f_m sigma_m) ||_{L^p(v)} against
// [w]^(1/p) (prod_i [sigma_i]^(1/p_i)
//            + [v]^(1/p') sum_{i'} prod_{i != i'} [sigma_i]^(1/p_i)) prod_i ||f_i||.
InequalityReport strong_report(const WeightVector& wv, const std::vector<CellFunction>& f,
                               const SparseFamily& fam);
// Same with the weak quasi-norm on the left and the weak-type factor layout
// [w]^(1/p) [v]^(1/p') sum_{i'} prod_{i != i'} [sigma_i]^(1/p_i).
InequalityReport weak_report(const WeightVector& wv, const std::vector<CellFunction>& f,
                             const SparseFamily& fam);

// ---- testing conditions ----

struct TestingOptions {
  int pairs_per_cube = 32;
  std::uint64_t seed = 1;
};

struct TestingEquivReport {
  double t_star = 0.0;      // sup over family cubes and dictionary pairs
  double weak_ratio = 0.0;  // W: max weak-norm ratio over the dictionary
  double apbar_pow = 0.0;   // [w]^(1/p)
  double easy_slack = 0.0;  // p' W - T* (the provable direction)
  double upper_c = 0.0;     // W / (T* + [w]^(1/p)), recorded
};

double testing_constant(const WeightVector& wv, const SparseFamily& fam,
                        const TestingOptions& opt);
TestingEquivReport testing_equiv_report(const WeightVector& wv, const SparseFamily& fam,
                                        const TestingOptions& opt);

// ---- sharpness sweep ----

struct SweepRow {
  double eps = 0, apbar = 0, ainf_sigma1 = 0, ainf_sigma2 = 0, ainf_v = 0;
  double norm_f1 = 0, norm_f2 = 0, r1_lower = 0;
  double elapsed_seconds = 0;  // in-memory only, never serialized
};

struct SlopeFit {
  double slope = 0, intercept = 0, max_abs_residual = 0;
};

// Least squares of log(value) against log(1/eps); needs >= 6 points.
SlopeFit fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& values);

struct SweepOptions {
  ModelConfig cfg{1, 8};
  ExponentSystem exps{std::vector<double>{2.2, 2.2}};
  std::vector<double> eps;  // within [2^-10, 2^-3]
  RieszMesh mesh{};
  int x_panels = 32;
  int threads = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // in the given eps order
  SlopeFit apbar, norm_product, ainf_sigma1, ainf_sigma2, r1;
};

SweepResult sharpness_sweep(const SweepOptions& opt);

struct SweepVerdict {
  struct Clause {
    std::string name;
    double slope = 0, target = 0, tolerance = 0;
    bool pass = false;
  };
  std::vector<Clause> clauses;
  bool all_pass = false;
};

// Pinned thresholds: |slope(apbar) - (mp-1)| <= 5%, |slope(prod norms) - 1/p|
// <= 5%, slope(r1 lower) >= m + 1/p - 5%, slope([sigma_i]) <= 1 + 5%.
SweepVerdict evaluate_sweep(const SweepResult& r, const ExponentSystem& e);

// ---- seeded suites ----

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured extreme
  double bound = 0.0;  // asserted bound; 0 for recorded-only checks
  double slack = 0.0;  // bound - value where a bound exists
  std::int64_t instances = 0;
  std::string note;
};

struct SuiteOptions {
  ModelConfig cfg{1, 8};
  ExponentSystem exps{std::vector<double>{2.2, 2.2}};
  std::uint64_t seed = 12345;
  int carleson_instances = 200;
  int transform_instances = 50;
  int weak_maximal_instances = 200;
  int sparse_instances = 200;
  int decomposition_instances = 100;
  int report_instances = 200;
  int family_depth = 4;
  double cz_ratio = 8.0;
  int testing_pairs = 8;
  int threads = 0;
  std::vector<std::string> only;  // check-group filter, empty = all
};

// Exactly-checkable lemma properties; groups: carleson, transform,
// weak_maximal, sparse, operators, decompositions, lm_ratios.
std::vector<CheckResult> lemma_suite(const SuiteOptions& opt);

struct ReportRow {
  std::string kind;  // strong | weak | testing
  std::uint64_t seed = 0;
  double lhs = 0, rhs = 0, ratio = 0;
  double apbar = 0, ainf_v = 0, ainf_s1 = 0, ainf_s2 = 0, norm1 = 0, norm2 = 0;
};

struct ReportSuiteResult {
  std::vector<ReportRow> rows;
  std::vector<CheckResult> checks;  // ratio budgets and testing directions
};

ReportSuiteResult report_suite(const SuiteOptions& opt);

}  // namespace workbench
