#include "combdim/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "combdim/metric_entropy.hpp"
#include "combdim/parallel.hpp"
#include "combdim/random.hpp"

namespace combdim {

double bernstein_bound(double u, double sup_bound, double variance_sum) {
  if (!(u > 0.0)) throw PreconditionError("bernstein_bound: u must be positive");
  if (sup_bound < 0.0 || variance_sum < 0.0) {
    throw PreconditionError("bernstein_bound: a and b^2 must be non-negative");
  }
  const double exponent = -(u * u) / (2.0 * (variance_sum + sup_bound * u / 3.0));
  return std::min(1.0, 2.0 * std::exp(exponent));
}

double min_separation_on(const FunctionFamily& family, const CoordinateSubset& subset) {
  subset.check_within(family.domain_size());
  if (subset.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const double unit = 1.0 / static_cast<double>(subset.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      double total = 0.0;
      for (std::size_t c : subset) {
        const double d = family(i, c) - family(j, c);
        total += d * d;
      }
      best = std::min(best, std::sqrt(total * unit));
    }
  }
  return best;
}

namespace {

void check_inputs(const FunctionFamily& family, double t, std::size_t k) {
  if (k == 0) throw PreconditionError("extraction: target size k must be >= 1");
  if (!(t > 0.0)) throw PreconditionError("extraction: scale t must be positive");
  const auto uniform = ProbabilityMeasure::uniform(family.domain_size());
  if (const auto pair = first_unseparated_pair(family, uniform, t)) {
    std::ostringstream os;
    os << "extraction: family is not t-separated under the uniform measure (rows " << pair->first << " and "
       << pair->second << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace

ExtractionDraw extraction_draw(const FunctionFamily& family, double t, std::size_t k, std::uint64_t seed,
                               std::uint64_t attempt) {
  const std::size_t n = family.domain_size();
  const double keep = std::min(1.0, static_cast<double>(k) / (2.0 * static_cast<double>(n)));
  Rng rng(derive_seed(seed, attempt));
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(keep)) chosen.push_back(i);
  }
  ExtractionDraw draw;
  draw.subset = CoordinateSubset(std::move(chosen));
  if (draw.subset.empty() || draw.subset.size() > k) return draw;
  draw.separation = min_separation_on(family, draw.subset);
  draw.accepted = draw.separation > t / 2.0;
  return draw;
}

ExtractionOutcome extract_coordinates(const FunctionFamily& family, double t, std::size_t k, std::uint64_t seed,
                                      std::size_t max_attempts) {
  check_inputs(family, t, k);
  double best = 0.0;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    ExtractionDraw draw = extraction_draw(family, t, k, seed, attempt);
    if (draw.accepted) return {std::move(draw.subset), attempt + 1, draw.separation, t / 2.0};
    best = std::max(best, draw.separation);
  }
  std::ostringstream os;
  os << "extraction: no accepted subset in " << max_attempts << " attempts (best separation " << best
     << ", target " << t / 2.0 << ")";
  throw ExtractionFailure(os.str(), best);
}

double extraction_success_probability(const FunctionFamily& family, double t, std::size_t k, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs) {
  if (trials == 0) throw PreconditionError("extraction_success_probability: trials must be >= 1");
  check_inputs(family, t, k);
  std::vector<char> accepted(trials, 0);
  parallel_for(trials, jobs, [&](std::size_t trial) {
    accepted[trial] = extraction_draw(family, t, k, seed, trial).accepted ? 1 : 0;
  });
  const auto hits = std::count(accepted.begin(), accepted.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(trials);
}

std::vector<ExtractionCurvePoint> extraction_curve(const FunctionFamily& family, double t,
                                                   const std::vector<std::size_t>& k_grid, std::size_t trials,
                                                   std::uint64_t seed, unsigned jobs) {
  std::vector<ExtractionCurvePoint> curve;
  for (std::size_t k : k_grid) {
    const double p = extraction_success_probability(family, t, k, trials, derive_seed(seed, k), jobs);
    curve.push_back({k, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))});
  }
  return curve;
}

ExtractionConstantEstimate estimate_extraction_constant(const FunctionFamily& family, double t, std::size_t trials,
                                                        std::uint64_t seed, unsigned jobs) {
  std::size_t lo = 1;
  std::size_t hi = 2 * family.domain_size();
  auto rate = [&](std::size_t k) {
    return extraction_success_probability(family, t, k, trials, derive_seed(seed, k), jobs);
  };
  double hi_rate = rate(hi);
  if (hi_rate < 0.5) {
    throw ExtractionFailure("extraction constant: success stays below 1/2 even at k = 2n", hi_rate);
  }
  double lo_rate = rate(lo);
  if (lo_rate >= 0.5) {
    hi = lo;
    hi_rate = lo_rate;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double mid_rate = rate(mid);
    if (mid_rate >= 0.5) {
      hi = mid;
      hi_rate = mid_rate;
    } else {
      lo = mid;
    }
  }
  ExtractionConstantEstimate estimate;
  estimate.k_half = hi;
  estimate.success_rate = hi_rate;
  estimate.constant = std::log(2.0 * static_cast<double>(family.size())) / (std::pow(t, 4) * static_cast<double>(hi));
  return estimate;
}

}  // namespace combdim
