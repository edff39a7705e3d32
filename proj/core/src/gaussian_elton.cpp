#include "combdim/gaussian_elton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "combdim/errors.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/parallel.hpp"
#include "combdim/random.hpp"

namespace combdim {

std::string to_string(ProcessKind kind) { return kind == ProcessKind::Gaussian ? "gaussian" : "rademacher"; }

ProcessKind parse_process_kind(const std::string& name) {
  if (name == "gaussian") return ProcessKind::Gaussian;
  if (name == "rademacher") return ProcessKind::Rademacher;
  throw PreconditionError("unknown process kind '" + name + "' (expected gaussian or rademacher)");
}

// ---------------------------------------------------------------------------
// Monte Carlo suprema

namespace {
constexpr std::size_t kBlock = 1024;
}

SupEstimate gaussian_sup_mc(const PointSet& points, std::size_t samples, std::uint64_t seed, ProcessKind kind,
                            unsigned jobs) {
  if (samples < 2) throw PreconditionError("gaussian_sup_mc: need at least 2 samples");
  if (points.rows() == 0) throw PreconditionError("gaussian_sup_mc: empty index set");
  const std::size_t n = points.cols();
  std::vector<double> values(samples);
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  parallel_for(blocks, jobs, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    std::vector<double> g(n);
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      for (auto& v : g) v = kind == ProcessKind::Gaussian ? rng.gaussian() : rng.rademacher();
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < points.rows(); ++r) {
        double dot = 0.0;
        for (std::size_t c = 0; c < n; ++c) dot += g[c] * points(r, c);
        best = std::max(best, dot);
      }
      values[s] = best;
    }
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(samples - 1));
  return {mean, sd / std::sqrt(static_cast<double>(samples)), samples, kind};
}

SupEstimate gaussian_sup_mc(const FunctionFamily& family, std::size_t samples, std::uint64_t seed, ProcessKind kind,
                            unsigned jobs) {
  return gaussian_sup_mc(family.values(), samples, seed, kind, jobs);
}

// ---------------------------------------------------------------------------
// Integrals

namespace {

void check_curve(const StepCurve& curve, const char* what) {
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const auto [t, v] = curve[k];
    if (!std::isfinite(t) || !(t > 0.0) || !std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << what << ": point " << k << " must have t > 0 and a finite non-negative value";
      throw PreconditionError(os.str());
    }
    if (k > 0 && !(t > curve[k - 1].first)) {
      std::ostringstream os;
      os << what << ": t values must be strictly increasing (point " << k << ")";
      throw PreconditionError(os.str());
    }
    if (k > 0 && v > curve[k - 1].second) {
      std::ostringstream os;
      os << what << ": values must be non-increasing in t (point " << k << ")";
      throw PreconditionError(os.str());
    }
  }
}

void check_limits(double lower, double upper, const char* what) {
  if (!(lower >= 0.0) || !(upper >= lower) || !std::isfinite(upper)) {
    std::ostringstream os;
    os << what << ": need 0 <= lower <= upper < infinity";
    throw PreconditionError(os.str());
  }
}

// Integral of sqrt(ln(2/t)) over [a, b], 0 <= a <= b <= 2.
double sqrt_log_integral(double a, double b) {
  const double hi = a > 0.0 ? upper_gamma_three_halves(std::log(2.0 / a)) : 0.0;
  const double lo = upper_gamma_three_halves(std::log(2.0 / b));
  return 2.0 * (lo - hi);
}

}  // namespace

double upper_gamma_three_halves(double x) {
  if (x < 0.0) throw PreconditionError("upper_gamma_three_halves: x must be non-negative");
  const double r = std::sqrt(x);
  return r * std::exp(-x) + 0.5 * std::sqrt(std::numbers::pi) * std::erfc(r);
}

double entropy_integral(const StepCurve& log_counts, double lower, double upper) {
  check_curve(log_counts, "entropy_integral");
  check_limits(lower, upper, "entropy_integral");
  double total = 0.0;
  double left = 0.0;
  for (const auto& [t, v] : log_counts) {
    const double a = std::max(left, lower);
    const double b = std::min(t, upper);
    if (b > a) total += std::sqrt(v) * (b - a);
    left = t;
  }
  return total;
}

double vc_integral(const StepCurve& vc_curve, double lower, double upper) {
  check_curve(vc_curve, "vc_integral");
  check_limits(lower, upper, "vc_integral");
  if (upper > 2.0) throw PreconditionError("vc_integral: upper limit must be at most 2");
  double total = 0.0;
  double left = 0.0;
  for (const auto& [t, v] : vc_curve) {
    const double a = std::max(left, lower);
    const double b = std::min(t, upper);
    if (b > a && v > 0.0) total += std::sqrt(v) * sqrt_log_integral(a, b);
    left = t;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Sudakov diagnostic

SudakovReport sudakov_ratio(const FunctionFamily& family, const std::vector<double>& t_grid, double expected_sup) {
  if (!(expected_sup > 0.0)) throw PreconditionError("sudakov_ratio: expected supremum must be positive");
  if (t_grid.empty()) throw PreconditionError("sudakov_ratio: empty scale grid");
  const double root_n = std::sqrt(static_cast<double>(family.domain_size()));
  const auto uniform = ProbabilityMeasure::uniform(family.domain_size());
  SudakovReport report;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw PreconditionError("sudakov_ratio: scales must be positive");
    const auto count = packing_number(family, uniform, t / root_n).count;
    report.packing.emplace_back(t, count);
    const double value = t * std::sqrt(std::log(static_cast<double>(count))) / expected_sup;
    if (value > report.ratio) {
      report.ratio = value;
      report.argmax_t = t;
    }
  }
  return report;
}

double weight_h_constant() { return std::pow(std::numbers::ln2, 0.1) / 10.0; }

double weight_h(double t) {
  if (!(t > 0.0 && t < 1.0)) throw PreconditionError("weight_h: t must lie in (0, 1)");
  return weight_h_constant() / (t * std::pow(std::log(2.0 / t), kWeightExponent));
}

std::vector<double> geometric_grid(std::size_t levels) {
  std::vector<double> grid;
  for (std::size_t k = 1; k <= levels; ++k) grid.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  return grid;
}

// ---------------------------------------------------------------------------
// Elton subsets

EltonResult elton_subset(const PolyhedralNorm& norm, const PointSet& vectors, const EltonOptions& options) {
  if (vectors.cols() != norm.dimension()) {
    throw PreconditionError("elton_subset: vectors and norm have different dimensions");
  }
  if (vectors.rows() == 0) throw PreconditionError("elton_subset: no vectors");
  if (options.t_grid.empty()) throw PreconditionError("elton_subset: empty t grid");
  for (double t : options.t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw PreconditionError("elton_subset: grid points must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    const double len = norm(vectors.row(i));
    if (len > 1.0 + 1e-9) {
      std::ostringstream os;
      os << "elton_subset: vector " << i << " has norm " << len << " > 1";
      throw PreconditionError(os.str());
    }
  }
  const std::size_t n = vectors.rows();
  const PointSet& f = norm.functionals();

  // b_j = (<f_j, x_i>)_i; B = conv{+-b_j} and ||sum a_i x_i|| = max_{z in B} <z, a>.
  std::vector<double> data;
  data.reserve(2 * f.rows() * n);
  for (double sign : {1.0, -1.0}) {
    for (std::size_t j = 0; j < f.rows(); ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t c = 0; c < f.cols(); ++c) dot += f(j, c) * vectors(i, c);
        data.push_back(sign * dot);
      }
    }
  }
  const PointSet images(2 * f.rows(), n, std::move(data));
  const VPolytope body(images, true);

  EltonResult result;
  result.tradeoff_exponent = options.tradeoff_exponent;
  result.expected_sup = gaussian_sup_mc(images, options.samples, options.seed, options.process, options.jobs);
  result.delta = result.expected_sup.mean / static_cast<double>(n);

  std::vector<ConvexVcResult> vcs(options.t_grid.size());
  parallel_for(vcs.size(), options.jobs, [&](std::size_t g) {
    vcs[g] = convex_vc(body, options.t_grid[g], false, options.max_cube_tests, options.exponent_budget);
  });

  std::size_t chosen = 0;
  double best_score = -1.0;
  double best_weight = -1.0;
  for (std::size_t g = 0; g < vcs.size(); ++g) {
    EltonSweepPoint point;
    point.t = options.t_grid[g];
    point.vc = vcs[g].dimension;
    point.support = vcs[g].support;
    point.s = std::sqrt(static_cast<double>(point.vc) / static_cast<double>(n));
    if (result.delta > 0.0) {
      point.weight = std::sqrt(point.s * point.s * std::log(2.0 / point.t)) / (result.delta * weight_h(point.t));
    }
    if (point.weight > best_weight) {
      best_weight = point.weight;
      result.weight_favoured = g;
    }
    const double score = point.s * point.t;
    if (score > best_score) {
      best_score = score;
      chosen = g;
    }
    result.sweep.push_back(std::move(point));
  }

  const EltonSweepPoint& pick = result.sweep[chosen];
  result.t_grid = pick.t;
  if (pick.vc == 0) {
    // Not even one coordinate clears the finest grid scale.
    result.s = 0.0;
    return result;
  }
  result.sigma = pick.support;
  result.s = pick.s;
  const Ell1Constant certified = ell1_lower_constant(norm, vectors, result.sigma, options.jobs,
                                                     options.exponent_budget);
  result.t = certified.value;
  result.coefficients = certified.coefficients;
  // Fresh, independent route: the primal LP when it is small enough.
  const bool primal = 2 * f.rows() + 1 <= 400;
  result.reproved_t = primal
                          ? ell1_lower_constant_primal(norm, vectors, result.sigma, options.exponent_budget).value
                          : ell1_lower_constant(norm, vectors, result.sigma, 1, options.exponent_budget).value;
  if (std::abs(result.reproved_t - result.t) > 1e-6) {
    std::ostringstream os;
    os << "certified constant " << result.t << " disagrees with re-proof " << result.reproved_t;
    throw AssertionFailure("elton", os.str());
  }
  if (result.t < result.t_grid / 2.0 - 1e-9) {
    std::ostringstream os;
    os << "certified constant " << result.t << " is below half the cube side " << result.t_grid;
    throw AssertionFailure("elton", os.str());
  }
  if (result.t > 0.0 && result.t < 2.0) {
    result.tradeoff = result.s * result.t * std::pow(std::log(2.0 / result.t), options.tradeoff_exponent);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Instances

RudelsonInstance rudelson_example(std::size_t n, double delta, bool cap_functionals) {
  if (n == 0 || n > 12) throw PreconditionError("rudelson_example: n must lie in [1, 12]");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("rudelson_example: delta must lie in (0, 1]");
  if (delta < 1.0 / root_n - 1e-12) {
    // Below 1/sqrt(n): n copies of delta sqrt(n) e_1 on the real line.
    RudelsonInstance out;
    out.delta = delta;
    out.norm = PolyhedralNorm(PointSet(1, 1, {1.0}));
    out.vectors = PointSet(n, 1, std::vector<double>(n, delta * root_n));
    return out;
  }
  // Sign-normalised rows (first nonzero entry positive) so +-duplicates merge.
  std::set<std::vector<double>> rows;
  auto add = [&](std::vector<double> v) {
    auto first = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
    if (first == v.end()) return;
    if (*first < 0.0) {
      for (auto& x : v) x = -x;
    }
    rows.insert(std::move(v));
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<double> v(n);
    v[0] = delta;
    for (std::size_t i = 1; i < n; ++i) v[i] = ((mask >> (i - 1)) & 1U) != 0 ? -delta : delta;
    add(std::move(v));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    add(std::move(v));
  }
  RudelsonInstance out;
  out.delta = delta;
  out.cap_size = static_cast<std::size_t>(std::floor(delta * delta * static_cast<double>(n) + 1e-9));
  if (cap_functionals && out.cap_size >= 2) {
    const std::size_t w = out.cap_size;
    for (std::size_t start = 0; start < n; ++start) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (w - 1)); ++mask) {
        std::vector<double> v(n, 0.0);
        v[start] = 1.0;
        for (std::size_t k = 1; k < w; ++k) v[(start + k) % n] = ((mask >> (k - 1)) & 1U) != 0 ? -1.0 : 1.0;
        add(std::move(v));
      }
    }
  }
  std::vector<std::vector<double>> list(rows.begin(), rows.end());
  out.norm = PolyhedralNorm(PointSet::from_rows(list));
  std::vector<std::vector<double>> basis(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1.0;
  out.vectors = PointSet::from_rows(basis);
  return out;
}

NormInstance random_norm_instance(std::size_t n, std::size_t functionals, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("random_norm_instance: n must be positive");
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    rows.push_back(std::move(e));
  }
  for (std::size_t j = 0; j < functionals; ++j) {
    std::vector<double> g(n);
    for (auto& v : g) v = rng.gaussian() / std::sqrt(static_cast<double>(n));
    rows.push_back(std::move(g));
  }
  PolyhedralNorm norm(PointSet::from_rows(rows));
  std::vector<std::vector<double>> vecs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.gaussian();
    const double len = norm(x);
    for (auto& v : x) v /= len;
    vecs.push_back(std::move(x));
  }
  return {std::move(norm), PointSet::from_rows(vecs)};
}

}  // namespace combdim
