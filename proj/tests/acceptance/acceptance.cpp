// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/constants.hpp"
#include "combdim/errors.hpp"
#include "combdim/experiments.hpp"
#include "combdim/extraction.hpp"
#include "combdim/gaussian_elton.hpp"
#include "combdim/geometry.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/random.hpp"
#include "combdim/report.hpp"
#include "combdim/separation_tree.hpp"
#include "combdim/shattering.hpp"
#include "oracles.hpp"

using namespace combdim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<double> random_weights(Rng& rng, std::size_t n, bool uniform) {
  if (uniform) return std::vector<double>(n, 1.0 / double(n));
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = double(1 + rng.below(4)));
  for (auto& x : w) x /= total;
  return w;
}

GeneratorKind real_kind(std::uint64_t i) {
  static const GeneratorKind kinds[] = {GeneratorKind::UniformReal, GeneratorKind::SignVectors,
                                        GeneratorKind::ConvexHullSections};
  return kinds[i % 3];
}

// Distributions with 1..10 atoms on [-3, 3], some atoms stacked on a grid.
Distribution random_distribution(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t atoms = 1 + rng.below(10);
  const bool grid = rng.bernoulli(0.3);
  std::vector<double> p(atoms);
  double total = 0.0;
  for (auto& x : p) total += (x = rng.uniform(0.01, 1.0));
  std::vector<Distribution::Atom> out;
  double sum = 0.0;
  for (std::size_t k = 0; k < atoms; ++k) {
    const double pk = k + 1 == atoms ? 1.0 - sum : p[k] / total;
    sum += pk;
    const double v = grid ? double(rng.below(4)) : rng.uniform(-3.0, 3.0);
    out.push_back({v, pk});
  }
  return Distribution(out);
}

// t-separated subfamily (largest, via the exact packing witness).
FunctionFamily separated_part(const FunctionFamily& a, const ProbabilityMeasure& mu, double t) {
  const auto pack = packing_number(a, mu, t);
  return a.select_rows(pack.witness);
}

// Independent re-check of a separating tree at `gap`.
bool tree_ok(const SeparatingTree& tree, const FunctionFamily& a, double gap) {
  for (const auto& node : tree.nodes) {
    if (node.rows.empty()) return false;
    if (!node.split) continue;
    const auto& plus = tree.nodes[node.split->plus_son].rows;
    const auto& minus = tree.nodes[node.split->minus_son].rows;
    for (std::size_t f : plus) {
      if (std::find(node.rows.begin(), node.rows.end(), f) == node.rows.end()) return false;
      if (std::find(minus.begin(), minus.end(), f) != minus.end()) return false;
      for (std::size_t g : minus) {
        if (!(a(f, node.split->coordinate) > a(g, node.split->coordinate) + gap)) return false;
      }
    }
    for (std::size_t g : minus) {
      if (std::find(node.rows.begin(), node.rows.end(), g) == node.rows.end()) return false;
    }
  }
  return true;
}

Outcome sandwich() {
  std::size_t violations = 0, checks = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(101, i));
    const std::size_t m = 2 + rng.below(19), n = 1 + rng.below(8);
    const auto a = gen_random_family(m, n, {real_kind(i)}, derive_seed(102, i));
    const ProbabilityMeasure mu(random_weights(rng, n, i % 2 == 0));
    const double d = diameter(a, mu);
    for (double f : {0.1, 0.25, 0.4, 0.6, 0.85}) {
      const double t = std::max(1e-3, f * d);
      const auto cover = covering_number(a, mu, t).count;
      const auto pack = packing_number(a, mu, t).count;
      const auto cover_half = covering_number(a, mu, t / 2).count;
      ++checks;
      if (!(cover <= pack && pack <= cover_half)) ++violations;
    }
  }
  return {violations == 0, std::to_string(checks) + " (family, scale) pairs, " + std::to_string(violations) +
                               " violations"};
}

Outcome variance_identity() {
  double worst_pair = 0.0, worst_inf = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto d = random_distribution(derive_seed(201, i));
    const auto v = variance(d);
    // Double sum written out here, independent of the library's pair sum.
    double pair = 0.0;
    for (const auto& x : d.atoms())
      for (const auto& y : d.atoms()) pair += x.probability * y.probability * (x.value - y.value) * (x.value - y.value);
    worst_pair = std::max({worst_pair, std::abs(v.pair_expectation - 2 * v.variance), std::abs(pair - 2 * v.variance)});
    double lo = -3.0, hi = 3.0;
    const double r = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
      if (d.mean_square_deviation(a) < d.mean_square_deviation(b)) hi = b; else lo = a;
    }
    worst_inf = std::max(worst_inf, std::abs(2 * d.mean_square_deviation((lo + hi) / 2) - 2 * v.variance));
  }
  std::ostringstream os;
  os << "1000 distributions, max |pair - 2var| = " << worst_pair << ", max |2 inf_a - 2var| = " << worst_inf;
  return {worst_pair <= 1e-12 && worst_inf <= 1e-9, os.str()};
}

Outcome small_deviation() {
  std::size_t done = 0, bad = 0;
  for (std::uint64_t i = 0; done < 1000; ++i) {
    const auto d = random_distribution(derive_seed(301, i));
    if (variance(d).variance <= 0.0) continue;
    ++done;
    try {
      const auto c = small_dev_split(d);
      double up = 0.0, down = 0.0;
      for (const auto& a : d.atoms()) {
        if (a.value > c.threshold + c.gap_halfwidth) up += a.probability;
        if (a.value < c.threshold - c.gap_halfwidth) down += a.probability;
      }
      const double heavy = c.side == SplitSide::UpperHeavy ? up : down;
      const double light = c.side == SplitSide::UpperHeavy ? down : up;
      const bool ok = c.beta > 0 && c.beta <= 0.5 && heavy >= 1 - c.beta - 1e-12 && light >= c.beta / 2 - 1e-12 &&
                      std::abs(c.gap_halfwidth - std::sqrt(variance(d).variance) / 6) <= 1e-12 &&
                      certificate_holds(d, c);
      if (!ok) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  return {bad == 0, std::to_string(done) + " distributions, " + std::to_string(bad) + " without a valid certificate"};
}

Outcome separating_tree() {
  std::size_t bad = 0, total_m = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng(derive_seed(401, i));
    const std::size_t m = 2 + rng.below(19), n = 1 + rng.below(8);
    const auto raw = gen_random_family(m, n, {real_kind(i)}, derive_seed(402, i));
    const ProbabilityMeasure mu(random_weights(rng, n, i % 2 == 0));
    const double t = rng.uniform(0.1, 0.9);
    const auto a = separated_part(raw, mu, t);
    total_m += a.size();
    const auto tree = build_separating_tree(a, mu, t);
    const auto leaves = tree.leaf_count();
    if (leaves * leaves < a.size() || !validate_tree(tree, a, t / 6) || !tree_ok(tree, a, t / 6)) ++bad;
  }
  return {bad == 0, "500 instances (" + std::to_string(total_m) + " functions), " + std::to_string(bad) +
                        " violations"};
}

Outcome counting_bound() {
  std::size_t bad = 0, done = 0, total_m = 0, max_m = 0;
  for (std::uint64_t i = 0; done < 100; ++i) {
    Rng rng(derive_seed(501, i));
    const std::size_t n = 2 + rng.below(5);
    const int p = 8 + int(rng.below(5));
    // Noisy corners of {0, p}^n, shuffled, then greedily thinned to 6-separation.
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < 40; ++r) {
      std::vector<double> row(n);
      for (auto& v : row) {
        const int noise = int(rng.below(3));
        v = rng.bernoulli(0.5) ? double(noise) : double(p - noise);
        if (rng.bernoulli(0.15)) v = double(rng.below(std::uint64_t(p) + 1));
      }
      rows.push_back(row);
    }
    const auto raw = FunctionFamily::integer_grid(rows, p);
    const auto w = oracle::uniform_weights(n);
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < raw.size() && kept.size() < 16; ++r) {
      bool ok = true;
      for (std::size_t k : kept) ok = ok && oracle::l2(raw, r, k, w) > 6.0;
      if (ok) kept.push_back(r);
    }
    if (kept.size() < 2) continue;
    ++done;
    const auto a = raw.select_rows(kept);
    total_m += a.size();
    max_m = std::max(max_m, a.size());
    const auto tree = build_separating_tree(a, ProbabilityMeasure::uniform(n), 6.0);
    const auto centres = count_shattered_centers(a);
    const bool ok = is_separated(a, ProbabilityMeasure::uniform(n), 6.0) && tree_ok(tree, a, 1.0) &&
                    centres >= tree.leaf_count() && double(centres) >= std::sqrt(double(a.size()));
    if (!ok) ++bad;
  }
  return {bad == 0, "100 instances (range 8..12, m <= " + std::to_string(max_m) + ", " + std::to_string(total_m) +
                        " functions), " + std::to_string(bad) + " violations"};
}

Outcome discretization_chain() {
  std::size_t bad = 0, budget = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(601, i));
    const std::size_t m = 2 + rng.below(11), n = 1 + rng.below(6);
    const auto raw = gen_random_family(m, n, {real_kind(i)}, derive_seed(602, i));
    const ProbabilityMeasure mu(random_weights(rng, n, i % 2 == 0));
    const double t = rng.uniform(0.3, 1.0);
    const auto a = separated_part(raw, mu, t);
    const auto d = discretize(a, mu, t);
    try {
      const bool six = is_separated(d, mu, 6.0);
      const bool vc = vc_integer(d) <= vc_real(a, t / 7);
      if (!six || !vc) ++bad;
    } catch (const BudgetExceeded&) {
      ++budget;
    }
  }
  return {bad == 0 && budget == 0, "200 instances, " + std::to_string(bad) + " violations, " +
                                       std::to_string(budget) + " over budget"};
}

Outcome extraction() {
  const std::size_t n = 20, k = 5, trials = 10000;
  const auto pair = FunctionFamily::real({std::vector<double>(n, 1.0), std::vector<double>(n, -1.0)});
  const double exact = oracle::binomial_window(n, double(k) / double(2 * n), k);
  const double rate = extraction_success_probability(pair, 1.9, k, trials, 701);
  const double se = std::sqrt(exact * (1 - exact) / double(trials));
  const bool within = std::abs(rate - exact) <= 3 * se;

  std::size_t accepted = 0, bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(702, i));
    const std::size_t m = 2 + rng.below(8), dim = 8 + rng.below(17);
    const auto raw = gen_random_family(m, dim, {real_kind(i)}, derive_seed(703, i));
    const auto mu = ProbabilityMeasure::uniform(dim);
    const double t = rng.uniform(0.2, 0.8);
    const auto a = separated_part(raw, mu, t);
    if (a.size() < 2) continue;
    for (std::uint64_t attempt = 0; attempt < 40; ++attempt) {
      const auto draw = extraction_draw(a, t, 1 + rng.below(dim), derive_seed(704, i), attempt);
      if (!draw.accepted) continue;
      ++accepted;
      std::vector<double> w(dim, 0.0);
      for (std::size_t c : draw.subset) w[c] = 1.0 / double(draw.subset.size());
      for (std::size_t f = 0; f < a.size(); ++f)
        for (std::size_t g = f + 1; g < a.size(); ++g)
          if (!(oracle::l2(a, f, g, w) > t / 2)) ++bad;
    }
  }
  std::ostringstream os;
  os << "acceptance " << rate << " vs exact " << exact << " (3 se = " << 3 * se << "); " << accepted
     << " accepted draws re-verified, " << bad << " failures";
  return {within && bad == 0 && accepted > 0, os.str()};
}

Outcome main_theorem() {
  const MainTheoremConfig config;
  const auto result = run_main_theorem_experiment(config);
  const double pin = config.constants.main_theorem_K_pin;
  // Oracle re-count of every packing number and of vc = 0 rows.
  std::size_t mismatches = 0;
  for (const auto& row : result.rows) {
    const auto inst = suite_instance(config.suite, row.instance);
    const auto w = oracle::uniform_weights(inst.family.domain_size());
    if (oracle::packing(inst.family, w, row.t) != row.packing) ++mismatches;
    if (row.vc == 0 && row.packing != 1) ++mismatches;
  }
  std::ostringstream os;
  os << result.rows.size() << " rows, " << result.skipped.size() << " skipped, max K_emp = " << result.max_k_emp
     << " (pin " << pin << "), oracle mismatches " << mismatches;
  return {result.finite_where_vc_positive && result.skipped.empty() && pin > 0 && result.max_k_emp <= pin &&
              mismatches == 0,
          os.str()};
}

PointSet sign_cube(std::size_t n) {
  std::vector<double> data;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
    for (std::size_t i = 0; i < n; ++i) data.push_back((mask >> i & 1) ? 1.0 : -1.0);
  return PointSet(std::size_t{1} << n, n, data);
}

Outcome gaussian_closed_forms() {
  bool ok = true;
  std::ostringstream os;
  for (std::size_t n : {2u, 5u, 10u}) {
    const auto cube = sign_cube(n);
    const auto g = gaussian_sup_mc(cube, 100000, 900 + n);
    const double target = double(n) * oracle::kSqrtTwoOverPi;
    const auto r = gaussian_sup_mc(cube, 2000, 950 + n, ProcessKind::Rademacher);
    const bool this_ok = std::abs(g.mean - target) <= 3 * g.standard_error && r.mean == double(n);
    ok = ok && this_ok;
    os << "n=" << n << ": " << g.mean << " vs " << target << " (3 se " << 3 * g.standard_error << "), rad "
       << r.mean << "; ";
  }
  return {ok, os.str()};
}

PointSet identity(std::size_t n) {
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
  return PointSet(n, n, data);
}

Outcome elton() {
  std::ostringstream os;
  EltonOptions options;
  options.samples = 20000;
  options.seed = 1001;
  // (a) l1 basis.
  const std::size_t n = 5;
  const PolyhedralNorm l1(sign_cube(n));
  const auto a = elton_subset(l1, identity(n), options);
  const bool ok_a = a.sigma == CoordinateSubset::all(n) && std::abs(a.t - 1.0) <= 1e-9;
  os << "(a) |sigma| " << a.sigma.size() << " t " << a.t << "; ";
  // (b) identical vectors.
  std::vector<double> same(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) same[i * n] = 1.0;
  const auto b = elton_subset(PolyhedralNorm(identity(n)), PointSet(n, n, same), options);
  const bool ok_b = b.sigma.size() == 1;
  os << "(b) |sigma| " << b.sigma.size() << "; ";
  // (c) Rudelson family.
  bool ok_c = true;
  double worst = -1.0;
  for (std::size_t dim : {6u, 8u, 10u}) {
    for (double delta : {0.3, 0.5, 0.8}) {
      const auto inst = rudelson_example(dim, delta);
      auto o = options;
      o.samples = 2000;
      const auto r = elton_subset(inst.norm, inst.vectors, o);
      const double excess = r.s * r.t - (delta + inst.net_slack);
      worst = std::max(worst, excess);
      if (r.s * r.t > delta * (1 + 1e-6) + inst.net_slack) ok_c = false;
    }
  }
  os << "(c) max s t - (delta + slack) = " << worst << "; ";
  // (d) random polyhedral suite against the pinned constant.
  const double pin = default_constants().elton_c_pin;
  EltonSuiteConfig suite;
  suite.elton.samples = 20000;
  const auto result = run_elton_suite(suite);
  bool ok_d = pin > 0;
  for (const auto& row : result.rows) {
    const auto& r = row.result;
    ok_d = ok_d && r.s >= pin * r.delta && r.t >= pin * r.delta;
  }
  os << "(d) min c_hat " << result.min_c_hat << " (pin " << pin << ") over " << result.rows.size() << " norms";
  return {ok_a && ok_b && ok_c && ok_d, os.str()};
}

Outcome pipeline_cli() {
#ifdef COMBDIM_CLI
  const auto dir = std::filesystem::temp_directory_path() / "combdim_acceptance";
  std::filesystem::create_directories(dir);
  std::size_t failures = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    const auto out = dir / ("pipeline_" + std::to_string(seed) + ".json");
    const std::string cmd = std::string("\"") + COMBDIM_CLI + "\" --seed " + std::to_string(seed) + " --out \"" +
                            out.string() + "\" pipeline > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      ++failures;
      continue;
    }
    const auto doc = load_report(out);
    for (const auto& stage : doc.at("stages"))
      if (!stage.at("passed").get<bool>()) ++failures;
  }
  std::filesystem::remove_all(dir);
  return {failures == 0, "20 seeds, " + std::to_string(failures) + " failures"};
#else
  return {false, "combdim CLI was not built"};
#endif
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "sandwich", 60, sandwich},
      {2, "variance-identity", 5, variance_identity},
      {3, "small-deviation", 10, small_deviation},
      {4, "separating-tree", 120, separating_tree},
      {5, "counting-bound", 300, counting_bound},
      {6, "discretization", 120, discretization_chain},
      {7, "extraction", 60, extraction},
      {8, "main-theorem", 300, main_theorem},
      {9, "gaussian-mc", 60, gaussian_closed_forms},
      {10, "elton", 600, elton},
      {11, "pipeline", 300, pipeline_cli},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %-18s %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
