#include "combdim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "combdim/errors.hpp"
#include "combdim/extraction.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/parallel.hpp"
#include "combdim/random.hpp"
#include "combdim/separation_tree.hpp"
#include "json_io.hpp"

namespace combdim {

// ---------------------------------------------------------------------------
// Suites

SuiteInstance suite_instance(const SuiteConfig& config, std::size_t index) {
  if (config.m_min < 1 || config.m_max < config.m_min || config.n_min < 1 || config.n_max < config.n_min) {
    throw PreconditionError("suite: need 1 <= m_min <= m_max and 1 <= n_min <= n_max");
  }
  if (config.kinds.empty()) throw PreconditionError("suite: no generator kinds");
  Rng rng(derive_seed(config.seed, 2 * index));
  SuiteInstance inst;
  inst.index = index;
  inst.kind = config.kinds[index % config.kinds.size()];
  const std::size_t m = config.m_min + rng.below(config.m_max - config.m_min + 1);
  const std::size_t n = config.n_min + rng.below(config.n_max - config.n_min + 1);
  inst.family = gen_random_family(m, n, GeneratorSpec{inst.kind, 4}, derive_seed(config.seed, 2 * index + 1));
  return inst;
}

Json json_of(const SuiteConfig& config) {
  Json kinds = Json::array();
  for (auto k : config.kinds) kinds.push_back(to_string(k));
  return Json{{"instances", config.instances}, {"m_min", config.m_min}, {"m_max", config.m_max},
              {"n_min", config.n_min},         {"n_max", config.n_max}, {"kinds", std::move(kinds)},
              {"seed", config.seed}};
}

namespace {

template <typename T>
void take(const Json& doc, const char* key, T& field) {
  if (!doc.contains(key)) return;
  try {
    field = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("config: bad value for '") + key + "'");
  }
}

void take_number(const Json& doc, const char* key, double& field) {
  if (doc.contains(key)) field = detail::parse_number(doc.at(key), std::string("config.") + key);
}

}  // namespace

void apply_overrides(SuiteConfig& config, const Json& doc) {
  if (!doc.is_object()) throw ParseError("config: suite must be an object");
  take(doc, "instances", config.instances);
  take(doc, "m_min", config.m_min);
  take(doc, "m_max", config.m_max);
  take(doc, "n_min", config.n_min);
  take(doc, "n_max", config.n_max);
  take(doc, "seed", config.seed);
  if (doc.contains("kinds")) {
    config.kinds.clear();
    for (const auto& k : doc.at("kinds")) config.kinds.push_back(parse_generator_kind(k.get<std::string>()));
  }
}

namespace {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

}  // namespace

// ---------------------------------------------------------------------------
// Entropy vs dimension

MainTheoremRow main_theorem_point(const FunctionFamily& family, double t, double c, std::uint64_t budget) {
  if (!(t > 0.0 && t < 2.0)) throw PreconditionError("main theorem: t must lie in (0, 2)");
  MainTheoremRow row;
  row.m = family.size();
  row.n = family.domain_size();
  row.t = t;
  const auto uniform = ProbabilityMeasure::uniform(family.domain_size());
  EntropyOptions opts;
  opts.force = true;
  row.packing = packing_number(family, uniform, t, opts).count;
  row.vc = vc_real(family, c * t, budget);
  const double denom = std::max(1.0, static_cast<double>(row.vc) * std::log(2.0 / t));
  row.k_emp = std::log(static_cast<double>(row.packing)) / denom;
  return row;
}

MainTheoremResult run_main_theorem_experiment(const MainTheoremConfig& config) {
  struct Slot {
    std::vector<MainTheoremRow> rows;
    std::string skipped;
  };
  std::vector<Slot> slots(config.suite.instances);
  parallel_for(slots.size(), config.jobs, [&](std::size_t i) {
    const SuiteInstance inst = suite_instance(config.suite, i);
    try {
      for (double t : config.t_grid) {
        MainTheoremRow row = main_theorem_point(inst.family, t, config.constants.main_theorem_c, config.budget);
        row.instance = i;
        row.kind = inst.kind;
        slots[i].rows.push_back(row);
      }
    } catch (const BudgetExceeded& e) {
      slots[i].rows.clear();
      slots[i].skipped = e.what();
    }
  });
  MainTheoremResult result;
  std::vector<double> values;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].skipped.empty()) {
      result.skipped.emplace_back(i, slots[i].skipped);
      continue;
    }
    for (const auto& row : slots[i].rows) {
      if (row.vc >= 1 && !std::isfinite(row.k_emp)) result.finite_where_vc_positive = false;
      values.push_back(row.k_emp);
      result.rows.push_back(row);
    }
  }
  if (!values.empty()) {
    result.max_k_emp = *std::max_element(values.begin(), values.end());
    result.median_k_emp = quantile(values, 0.5);
    result.q90_k_emp = quantile(values, 0.9);
    result.q99_k_emp = quantile(values, 0.99);
  }
  return result;
}

Json json_of(const MainTheoremConfig& config) {
  return Json{{"suite", json_of(config.suite)},
              {"t_grid", config.t_grid},
              {"budget", config.budget},
              {"c", config.constants.main_theorem_c}};
}

Report main_theorem_report(const MainTheoremConfig& config, const MainTheoremResult& result) {
  Report report;
  report.kind = "main-theorem";
  report.document["config"] = json_of(config);
  Json skipped = Json::array();
  for (const auto& [i, why] : result.skipped) skipped.push_back(Json{{"instance", i}, {"reason", why}});
  report.document["summary"] = Json{{"rows", result.rows.size()},
                                    {"max_k_emp", result.max_k_emp},
                                    {"median_k_emp", result.median_k_emp},
                                    {"q90_k_emp", result.q90_k_emp},
                                    {"q99_k_emp", result.q99_k_emp},
                                    {"finite_where_vc_positive", result.finite_where_vc_positive},
                                    {"skipped", std::move(skipped)}};
  Json rows = Json::array();
  report.table.header = {"instance", "kind", "m", "n", "t", "packing", "vc", "k_emp"};
  for (const auto& r : result.rows) {
    rows.push_back(Json{{"instance", r.instance}, {"kind", to_string(r.kind)}, {"m", r.m}, {"n", r.n},
                        {"t", r.t}, {"packing", r.packing}, {"vc", r.vc}, {"k_emp", r.k_emp}});
    report.table.rows.push_back({csv_field(r.instance), to_string(r.kind), csv_field(r.m), csv_field(r.n),
                                 csv_field(r.t), csv_field(r.packing), csv_field(r.vc), csv_field(r.k_emp)});
  }
  report.document["rows"] = std::move(rows);
  return report;
}

// ---------------------------------------------------------------------------
// Pipeline trace

Json json_of(const PipelineConfig& config) {
  return Json{{"m", config.m},
              {"n", config.n},
              {"kind", to_string(config.kind)},
              {"seed", config.seed},
              {"t", config.t},
              {"k", config.k},
              {"measure_denominator", config.measure_denominator},
              {"uniformize_bound", config.uniformize_bound},
              {"budget", config.budget},
              {"corrupt_tree", config.corrupt_tree}};
}

void apply_overrides(PipelineConfig& config, const Json& doc) {
  if (!doc.is_object()) throw ParseError("config: pipeline must be an object");
  take(doc, "m", config.m);
  take(doc, "n", config.n);
  if (doc.contains("kind")) config.kind = parse_generator_kind(doc.at("kind").get<std::string>());
  take(doc, "seed", config.seed);
  take_number(doc, "t", config.t);
  take(doc, "k", config.k);
  take(doc, "measure_denominator", config.measure_denominator);
  take(doc, "uniformize_bound", config.uniformize_bound);
  take(doc, "budget", config.budget);
  take(doc, "corrupt_tree", config.corrupt_tree);
}

LoadedFamily pipeline_instance(const PipelineConfig& config) {
  if (config.measure_denominator < 1) throw PreconditionError("pipeline: measure_denominator must be >= 1");
  FunctionFamily family = gen_random_family(config.m, config.n, GeneratorSpec{config.kind, 4}, config.seed);
  Rng rng(derive_seed(config.seed, 0x6d65617375726eULL));
  std::vector<double> counts(config.n);
  double total = 0.0;
  for (auto& c : counts) {
    c = static_cast<double>(1 + rng.below(config.measure_denominator));
    total += c;
  }
  for (auto& c : counts) c /= total;
  return {std::move(family), ProbabilityMeasure(std::move(counts))};
}

namespace {

class Trace {
 public:
  explicit Trace(Json& stages) : stages_(stages) {}

  void pass(const std::string& stage, Json certificate) {
    stages_.push_back(Json{{"stage", stage}, {"passed", true}, {"certificate", std::move(certificate)}});
  }

  [[noreturn]] void fail(const std::string& stage, const std::string& message, Json certificate) {
    stages_.push_back(Json{{"stage", stage}, {"passed", false}, {"certificate", certificate}});
    throw AssertionFailure(stage, message + "\ncertificate: " + certificate.dump());
  }

  void check(bool ok, const std::string& stage, const std::string& message, Json certificate) {
    if (ok) {
      pass(stage, std::move(certificate));
    } else {
      fail(stage, message, std::move(certificate));
    }
  }

 private:
  Json& stages_;
};

}  // namespace

Report run_pipeline_trace(const PipelineConfig& config) {
  const LoadedFamily inst = pipeline_instance(config);
  return run_pipeline_trace(inst.family, inst.measure, config);
}

Report run_pipeline_trace(const FunctionFamily& family, const ProbabilityMeasure& measure,
                          const PipelineConfig& config) {
  if (!(config.t > 0.0 && config.t <= 0.5)) throw PreconditionError("pipeline: t must lie in (0, 1/2]");
  if (family.is_integer()) throw PreconditionError("pipeline: needs a real-valued family");
  const double t = config.t;
  Report report;
  report.kind = "pipeline";
  report.document["config"] = json_of(config);
  Json stages = Json::array();
  Trace trace(stages);
  auto finish = [&](bool trivial) {
    report.document["trivial"] = trivial;
    report.document["stages"] = stages;
    return report;
  };

  {
    // Atom splitting: distances must survive exactly (up to the weight residual).
    const UniformizedFamily uni = uniformize(family, measure, config.uniformize_bound);
    const auto uniform_all = ProbabilityMeasure::uniform(uni.family.domain_size());
    double worst = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const double a = lp_distance(family.row(i), family.row(j), measure);
        const double b = lp_distance(uni.family.row(i), uni.family.row(j), uniform_all);
        worst = std::max(worst, std::abs(a - b));
      }
    }
    trace.check(worst <= 1e-6, "uniformize", "pairwise distances changed under atom splitting",
                Json{{"denominator", uni.denominator},
                     {"replication", uni.replication},
                     {"residual", uni.residual},
                     {"max_distance_change", worst}});

    // Maximal 2t-separated subfamily.
    EntropyOptions exact;
    exact.force = true;
    const EntropyCount packing = packing_number(uni.family, uniform_all, 2.0 * t, exact);
    const FunctionFamily sep = uni.family.select_rows(packing.witness);
    const std::size_t m = sep.size();
    trace.check(is_separated(sep, uniform_all, 2.0 * t), "separate", "selected subset is not 2t-separated",
                Json{{"rows", packing.witness}, {"size", m}, {"scale", 2.0 * t}});
    if (m == 1) return finish(true);

    // Variance identity on every coordinate distribution.
    double identity_gap = 0.0;
    for (std::size_t i = 0; i < sep.domain_size(); ++i) {
      std::vector<double> column(m);
      for (std::size_t r = 0; r < m; ++r) column[r] = sep(r, i);
      const VarianceReport v = variance(Distribution::empirical(column));
      identity_gap = std::max(identity_gap, std::abs(v.pair_expectation - 2.0 * v.variance));
    }
    trace.check(identity_gap <= 1e-9, "variance-identity", "E|X - X'|^2 differs from 2 Var X",
                Json{{"max_gap", identity_gap}, {"coordinates", sep.domain_size()}});

    // Some coordinate has deviation >= (2t)/2, with a valid split certificate.
    const SeparatingCoordinate root = find_separating_coordinate(sep, uniform_all, 2.0 * t);
    {
      std::vector<double> column(m);
      for (std::size_t r = 0; r < m; ++r) column[r] = sep(r, root.coordinate);
      const bool holds = certificate_holds(Distribution::empirical(column), root.certificate);
      trace.check(root.deviation >= t && holds, "separation-lemma",
                  "coordinate deviation below t or split certificate invalid", json_of(root));
    }

    // Random extraction at the 2t -> t scale; k doubles until p = 1.
    const std::size_t big_n = sep.domain_size();
    std::size_t k = config.k == 0 ? big_n : config.k;
    std::optional<ExtractionOutcome> outcome;
    while (!outcome) {
      try {
        outcome = extract_coordinates(sep, 2.0 * t, k, derive_seed(config.seed, k));
      } catch (const ExtractionFailure&) {
        if (k >= 2 * big_n) throw;
        k = std::min(2 * k, 2 * big_n);
      }
    }
    const CoordinateSubset& sigma = outcome->subset;
    const double achieved = min_separation_on(sep, sigma);
    Json extract_cert = json_of(*outcome);
    extract_cert["k"] = k;
    trace.check(achieved > t, "extract", "extracted coordinates lost t-separation", extract_cert);

    // Discretise on sigma: the image must be 6-separated.
    const FunctionFamily restricted = sep.restrict_to(sigma);
    const auto uniform_sigma = ProbabilityMeasure::uniform(sigma.size());
    const FunctionFamily disc = discretize(restricted, uniform_sigma, t);
    const auto pairs = first_unseparated_pair(disc, uniform_sigma, 6.0);
    trace.check(!pairs.has_value(), "discretize", "discretised family is not 6-separated",
                Json{{"range_max", disc.range_max()},
                     {"coordinates", sigma.size()},
                     {"first_bad_pair", pairs ? Json::array({pairs->first, pairs->second}) : Json()}});

    // 1-separating tree at scale 6.
    SeparatingTree tree = build_separating_tree(disc, uniform_sigma, 6.0);
    if (config.corrupt_tree && tree.nodes[0].split) {
      std::swap(tree.nodes[0].split->plus_son, tree.nodes[0].split->minus_son);
    }
    const TreeValidation valid = validate_tree(tree, disc, 1.0);
    const std::size_t leaves = tree.leaf_count();
    Json tree_cert = json_of(tree);
    tree_cert["validation"] = valid.message;
    trace.check(valid.ok, "tree", "tree validation failed: " + valid.message, tree_cert);
    trace.check(static_cast<double>(leaves) * static_cast<double>(leaves) >= static_cast<double>(m), "tree-leaves",
                "fewer than sqrt(|A|) leaves", Json{{"leaves", leaves}, {"m", m}});

    // Every internal node's split comes with a valid small-deviation certificate.
    Json split_certs = Json::array();
    bool all_hold = true;
    for (const auto& node : tree.nodes) {
      if (!node.split) continue;
      const FunctionFamily sub = disc.select_rows(node.rows);
      const SeparatingCoordinate sc =
          find_separating_coordinate(sub, ProbabilityMeasure::uniform(sub.domain_size()), 6.0);
      std::vector<double> column(sub.size());
      for (std::size_t r = 0; r < sub.size(); ++r) column[r] = sub(r, sc.coordinate);
      all_hold = all_hold && certificate_holds(Distribution::empirical(column), sc.certificate);
      split_certs.push_back(json_of(sc));
    }
    trace.check(all_hold, "split-certificates", "a split certificate failed to hold", split_certs);

    // Shattered centres.
    const std::uint64_t centres = count_shattered_centers(disc, config.budget);
    trace.check(centres >= leaves && static_cast<double>(centres) >= std::sqrt(static_cast<double>(m)), "centres",
                "fewer shattered centres than leaves or sqrt(|A|)",
                Json{{"centres", centres}, {"leaves", leaves}, {"sqrt_m", std::sqrt(static_cast<double>(m))}});

    // Counting bound ingredients and the dimension transfer back to A.
    const std::size_t d = vc_integer(disc, config.budget);
    const RealShatterResult real = vc_real_witness(restricted, t / 7.0, config.budget);
    Json count_cert{{"vc_integer", d},
                    {"vc_real_t_over_7", json_of(real)},
                    {"range_max", disc.range_max()},
                    {"sigma_size", sigma.size()},
                    {"m", m}};
    const double ratio = static_cast<double>(disc.range_max()) * static_cast<double>(sigma.size()) /
                         static_cast<double>(std::max<std::size_t>(d, 1));
    if (d >= 1 && ratio > 1.0) {
      count_cert["empirical_C"] = std::log(static_cast<double>(m)) / (static_cast<double>(d) * std::log(ratio));
    }
    trace.check(d <= real.dimension, "count", "vc of the discretised family exceeds vc(A, t/7)", count_cert);
  }
  return finish(false);
}

// ---------------------------------------------------------------------------
// Entropy integrals

DudleyResult run_dudley_experiment(const DudleyConfig& config) {
  std::vector<DudleyRow> rows(config.suite.instances);
  parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
    const SuiteInstance inst = suite_instance(config.suite, i);
    const FunctionFamily& a = inst.family;
    DudleyRow& row = rows[i];
    row.instance = i;
    row.m = a.size();
    row.n = a.domain_size();
    row.expected_sup = gaussian_sup_mc(a, config.samples, derive_seed(config.suite.seed, 1000 + i));
    const double e = row.expected_sup.mean;
    if (!(e > 0.0)) return;
    const double root_n = std::sqrt(static_cast<double>(row.n));
    const auto uniform = ProbabilityMeasure::uniform(row.n);
    EntropyOptions exact;
    exact.force = true;

    // Euclidean scales up to the diameter.
    const double diam = diameter(a, uniform) * root_n;
    StepCurve entropy;
    for (std::size_t k = 1; k <= config.scales; ++k) {
      const double s = diam * static_cast<double>(k) / static_cast<double>(config.scales);
      const auto cover = covering_number(a, uniform, s / root_n, exact).count;
      entropy.emplace_back(s, std::log(static_cast<double>(cover)));
    }
    row.dudley_integral = entropy_integral(entropy, config.constants.dudley_lower_c * e / root_n, diam);
    if (row.dudley_integral > 0.0) row.dudley_k = e / row.dudley_integral;

    StepCurve vcs;
    for (std::size_t k = config.scales; k-- > 0;) {
      const double s = std::pow(2.0, -0.5 * static_cast<double>(k));
      vcs.emplace_back(s, static_cast<double>(vc_real(a, s)));
    }
    const double lower = std::min(1.0, config.constants.vc_lower_c * e / static_cast<double>(row.n));
    row.vc_integral = vc_integral(vcs, lower, 1.0);
    if (row.vc_integral > 0.0) row.vc_k = (e / root_n) / row.vc_integral;

    std::vector<double> grid;
    for (const auto& [s, v] : entropy) grid.push_back(s);
    row.sudakov = sudakov_ratio(a, grid, e).ratio;
  });
  DudleyResult result;
  result.rows = std::move(rows);
  for (const auto& r : result.rows) {
    result.max_dudley_k = std::max(result.max_dudley_k, r.dudley_k);
    result.max_vc_k = std::max(result.max_vc_k, r.vc_k);
  }
  return result;
}

Report dudley_report(const DudleyConfig& config, const DudleyResult& result) {
  Report report;
  report.kind = "dudley";
  report.document["config"] = Json{{"suite", json_of(config.suite)},
                                   {"samples", config.samples},
                                   {"scales", config.scales},
                                   {"dudley_lower_c", config.constants.dudley_lower_c},
                                   {"vc_lower_c", config.constants.vc_lower_c}};
  report.document["summary"] = Json{{"max_dudley_k", result.max_dudley_k}, {"max_vc_k", result.max_vc_k}};
  report.table.header = {"instance", "m", "n", "expected_sup", "stderr", "dudley_integral", "dudley_k",
                         "vc_integral", "vc_k", "sudakov"};
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    rows.push_back(Json{{"instance", r.instance},
                        {"m", r.m},
                        {"n", r.n},
                        {"expected_sup", json_of(r.expected_sup)},
                        {"dudley_integral", r.dudley_integral},
                        {"dudley_k", r.dudley_k},
                        {"vc_integral", r.vc_integral},
                        {"vc_k", r.vc_k},
                        {"sudakov", r.sudakov}});
    report.table.rows.push_back({csv_field(r.instance), csv_field(r.m), csv_field(r.n),
                                 csv_field(r.expected_sup.mean), csv_field(r.expected_sup.standard_error),
                                 csv_field(r.dudley_integral), csv_field(r.dudley_k), csv_field(r.vc_integral),
                                 csv_field(r.vc_k), csv_field(r.sudakov)});
  }
  report.document["rows"] = std::move(rows);
  return report;
}

// ---------------------------------------------------------------------------
// Elton suite

EltonSuiteResult run_elton_suite(const EltonSuiteConfig& config) {
  if (config.n_min < 1 || config.n_max < config.n_min) throw PreconditionError("elton suite: bad n range");
  EltonSuiteResult result;
  result.min_c_hat = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.instances; ++i) {
    Rng rng(derive_seed(config.seed, 2 * i));
    const std::size_t n = config.n_min + rng.below(config.n_max - config.n_min + 1);
    const NormInstance inst =
        random_norm_instance(n, config.functionals_per_dim * n, derive_seed(config.seed, 2 * i + 1));
    EltonOptions opts = config.elton;
    opts.seed = derive_seed(config.seed, 1000 + i);
    EltonSuiteRow row;
    row.instance = i;
    row.n = n;
    row.result = elton_subset(inst.norm, inst.vectors, opts);
    row.c_hat = row.result.delta > 0.0 ? std::min(row.result.s, row.result.t) / row.result.delta : 0.0;
    result.min_c_hat = std::min(result.min_c_hat, row.c_hat);
    result.rows.push_back(std::move(row));
  }
  if (result.rows.empty()) result.min_c_hat = 0.0;
  return result;
}

Report elton_suite_report(const EltonSuiteConfig& config, const EltonSuiteResult& result) {
  Report report;
  report.kind = "elton-suite";
  Json grid = config.elton.t_grid;
  report.document["config"] = Json{{"instances", config.instances},
                                   {"n_min", config.n_min},
                                   {"n_max", config.n_max},
                                   {"functionals_per_dim", config.functionals_per_dim},
                                   {"seed", config.seed},
                                   {"samples", config.elton.samples},
                                   {"process", to_string(config.elton.process)},
                                   {"t_grid", std::move(grid)}};
  report.document["summary"] = Json{{"min_c_hat", result.min_c_hat}};
  report.table.header = {"instance", "n", "delta", "s", "t", "c_hat", "tradeoff_over_delta"};
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    const double ratio = r.result.delta > 0.0 ? r.result.tradeoff / r.result.delta : 0.0;
    rows.push_back(Json{{"instance", r.instance}, {"n", r.n}, {"c_hat", r.c_hat}, {"elton", json_of(r.result)}});
    report.table.rows.push_back({csv_field(r.instance), csv_field(r.n), csv_field(r.result.delta),
                                 csv_field(r.result.s), csv_field(r.result.t), csv_field(r.c_hat),
                                 csv_field(ratio)});
  }
  report.document["rows"] = std::move(rows);
  return report;
}

}  // namespace combdim
