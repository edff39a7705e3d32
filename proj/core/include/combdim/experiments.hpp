#ifndef COMBDIM_EXPERIMENTS_HPP
#define COMBDIM_EXPERIMENTS_HPP

// Experiment drivers behind the CLI: the empirical entropy-vs-dimension
// constant, the end-to-end proof pipeline with certificate dumps, and the
// fitted constants of the entropy-integral and Elton bounds.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/constants.hpp"
#include "combdim/gaussian_elton.hpp"
#include "combdim/report.hpp"
#include "combdim/shattering.hpp"

namespace combdim {

struct SuiteConfig {
  std::size_t instances = 200;
  std::size_t m_min = 2;
  std::size_t m_max = 14;
  std::size_t n_min = 2;
  std::size_t n_max = 6;
  std::vector<GeneratorKind> kinds = {GeneratorKind::UniformReal, GeneratorKind::SignVectors,
                                      GeneratorKind::ConvexHullSections};
  std::uint64_t seed = 1;
};

struct SuiteInstance {
  std::size_t index = 0;
  GeneratorKind kind = GeneratorKind::UniformReal;
  FunctionFamily family;
};

// Instance i depends only on (config, i).
SuiteInstance suite_instance(const SuiteConfig& config, std::size_t index);

Json json_of(const SuiteConfig& config);
// Overrides the fields present in `doc` (same names as json_of emits).
void apply_overrides(SuiteConfig& config, const Json& doc);

struct MainTheoremConfig {
  SuiteConfig suite;
  std::vector<double> t_grid = {0.5, 0.35, 0.25};
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned jobs = 1;
  ConstantsConfig constants = default_constants();
};

struct MainTheoremRow {
  std::size_t instance = 0;
  GeneratorKind kind = GeneratorKind::UniformReal;
  std::size_t m = 0;
  std::size_t n = 0;
  double t = 0.0;
  std::size_t packing = 0;
  std::size_t vc = 0;  // vc(A, c t)
  double k_emp = 0.0;  // ln N / max(1, vc ln(2/t))
};

struct MainTheoremResult {
  std::vector<MainTheoremRow> rows;
  std::vector<std::pair<std::size_t, std::string>> skipped;  // (instance, reason)
  double max_k_emp = 0.0;
  double median_k_emp = 0.0;
  double q90_k_emp = 0.0;
  double q99_k_emp = 0.0;
  bool finite_where_vc_positive = true;
};

// K_emp for one family at one scale (uniform measure).
MainTheoremRow main_theorem_point(const FunctionFamily& family, double t, double c,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

// Budget failures skip the instance (logged in `skipped`), never fall back.
MainTheoremResult run_main_theorem_experiment(const MainTheoremConfig& config);
Report main_theorem_report(const MainTheoremConfig& config, const MainTheoremResult& result);
Json json_of(const MainTheoremConfig& config);

struct PipelineConfig {
  std::size_t m = 10;
  std::size_t n = 5;
  GeneratorKind kind = GeneratorKind::UniformReal;
  std::uint64_t seed = 0;
  double t = 0.25;  // the family is thinned to a 2t-separated subset
  std::size_t k = 0;  // extraction target, 0 means the uniformised domain size
  // Atom weights are k_i / sum(k) with k_i uniform in {1..D}; D = 1 is uniform.
  std::size_t measure_denominator = 3;
  std::uint64_t uniformize_bound = 1'000'000;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool corrupt_tree = false;  // fault injection: swap the root's sons
};

Json json_of(const PipelineConfig& config);
void apply_overrides(PipelineConfig& config, const Json& doc);

// Generates the configured instance and its measure.
LoadedFamily pipeline_instance(const PipelineConfig& config);

// Runs uniformize -> separate -> lemma checks -> extract -> discretize ->
// tree -> centres -> count, asserting each conclusion. Throws
// AssertionFailure(stage, message + certificate dump) on the first failure.
Report run_pipeline_trace(const PipelineConfig& config);
Report run_pipeline_trace(const FunctionFamily& family, const ProbabilityMeasure& measure,
                          const PipelineConfig& config);

struct DudleyConfig {
  SuiteConfig suite{20, 2, 12, 3, 6, {GeneratorKind::UniformReal, GeneratorKind::SignVectors,
                                      GeneratorKind::ConvexHullSections}, 7};
  std::size_t samples = 20000;
  std::size_t scales = 16;
  unsigned jobs = 1;
  ConstantsConfig constants = default_constants();
};

struct DudleyRow {
  std::size_t instance = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  SupEstimate expected_sup;
  double dudley_integral = 0.0;
  double dudley_k = 0.0;  // E / integral
  double vc_integral = 0.0;
  double vc_k = 0.0;      // (E / sqrt n) / integral
  double sudakov = 0.0;
};

struct DudleyResult {
  std::vector<DudleyRow> rows;
  double max_dudley_k = 0.0;
  double max_vc_k = 0.0;
};

DudleyResult run_dudley_experiment(const DudleyConfig& config);
Report dudley_report(const DudleyConfig& config, const DudleyResult& result);

struct EltonSuiteConfig {
  std::size_t instances = 6;
  std::size_t n_min = 3;
  std::size_t n_max = 5;
  std::size_t functionals_per_dim = 2;
  std::uint64_t seed = 11;
  EltonOptions elton;
};

struct EltonSuiteRow {
  std::size_t instance = 0;
  std::size_t n = 0;
  EltonResult result;
  double c_hat = 0.0;  // min(s, t) / delta
};

struct EltonSuiteResult {
  std::vector<EltonSuiteRow> rows;
  double min_c_hat = 0.0;
};

EltonSuiteResult run_elton_suite(const EltonSuiteConfig& config);
Report elton_suite_report(const EltonSuiteConfig& config, const EltonSuiteResult& result);

}  // namespace combdim

#endif  // COMBDIM_EXPERIMENTS_HPP
