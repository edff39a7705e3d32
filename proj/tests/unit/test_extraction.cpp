#include <gtest/gtest.h>

#include <cmath>

#include "combdim/class_model.hpp"
#include "combdim/errors.hpp"
#include "combdim/extraction.hpp"
#include "combdim/metric_entropy.hpp"
#include "oracles.hpp"

using namespace combdim;

namespace {

FunctionFamily constant_pair(std::size_t n) {
  return FunctionFamily::real({std::vector<double>(n, 1.0), std::vector<double>(n, -1.0)});
}

// Exact single-draw acceptance by summing over all 2^n indicator patterns.
double exact_acceptance(const FunctionFamily& a, double t, std::size_t k) {
  const std::size_t n = a.domain_size();
  const double p = double(k) / double(2 * n);
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const std::size_t size = std::size_t(oracle::popcount(mask));
    if (size > k) continue;
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w[i] = 1.0 / double(size);
    bool ok = true;
    for (std::size_t f = 0; f < a.size() && ok; ++f)
      for (std::size_t g = f + 1; g < a.size() && ok; ++g) ok = oracle::l2(a, f, g, w) > t / 2;
    if (ok) total += std::pow(p, double(size)) * std::pow(1 - p, double(n - size));
  }
  return total;
}

}  // namespace

TEST(Bernstein, Examples) {
  EXPECT_EQ(bernstein_bound(1.0, 0.0, 1.0), 1.0);
  EXPECT_NEAR(bernstein_bound(10.0, 0.0, 1.0) / (2 * std::exp(-50.0)), 1.0, 1e-14);
  EXPECT_LT(bernstein_bound(2.0, 1.0, 1.0), bernstein_bound(1.0, 1.0, 1.0));
  EXPECT_THROW(bernstein_bound(0.0, 1.0, 1.0), PreconditionError);
}

TEST(Bernstein, MatchesFormula) {
  for (double u = 0.25; u < 20; u *= 1.3) {
    for (double a : {0.0, 0.5, 2.0}) {
      for (double b2 : {0.1, 1.0, 5.0}) {
        const double expected = std::min(1.0, 2.0 * std::exp(-(u * u) / (2.0 * (b2 + a * u / 3.0))));
        EXPECT_NEAR(bernstein_bound(u, a, b2), expected, 1e-15);
      }
    }
  }
}

TEST(Extract, ConstantDifferencePair) {
  const auto a = constant_pair(20);
  const auto out = extract_coordinates(a, 1.9, 5, 3);
  EXPECT_GE(out.subset.size(), 1u);
  EXPECT_LE(out.subset.size(), 5u);
  EXPECT_DOUBLE_EQ(out.achieved_separation, 2.0);
  EXPECT_DOUBLE_EQ(out.target_separation, 0.95);
  EXPECT_LE(out.attempts, 10u);
}

TEST(Extract, Preconditions) {
  const auto a = constant_pair(4);
  EXPECT_THROW(extract_coordinates(a, 1.9, 0, 1), PreconditionError);
  EXPECT_THROW(extract_coordinates(a, 2.5, 2, 1), PreconditionError);
  EXPECT_THROW(extraction_success_probability(a, 1.9, 2, 0, 1), PreconditionError);
  EXPECT_THROW(extraction_success_probability(a, 3.0, 2, 100, 1), PreconditionError);
}

TEST(Extract, ExhaustionReportsBestSeparation) {
  // Rows differ on one of 20 coordinates; k = 1 rarely hits it.
  std::vector<double> f(20, 0.0), g(20, 0.0);
  f[7] = 1.0;
  g[7] = -1.0;
  const auto a = FunctionFamily::real({f, g});
  try {
    extract_coordinates(a, 0.4, 1, 1, 3);
    SUCCEED();
  } catch (const ExtractionFailure& e) {
    EXPECT_GE(e.best_separation(), 0.0);
  }
}

TEST(Extract, SingleDifferingCoordinateMatchesEnumeration) {
  const auto a = FunctionFamily::real({{1, 0, 0, 0}, {-1, 0, 0, 0}});
  for (std::size_t k : {1u, 2u, 4u}) {
    const double exact = exact_acceptance(a, 0.99, k);
    const std::size_t trials = 20000;
    const double rate = extraction_success_probability(a, 0.99, k, trials, 5);
    const double se = std::sqrt(exact * (1 - exact) / double(trials));
    EXPECT_NEAR(rate, exact, 3 * se + 1e-12) << k;
  }
  EXPECT_NEAR(exact_acceptance(a, 0.99, 1), 0.125 * std::pow(0.875, 3), 1e-15);
}

TEST(Extract, ConstantPairMatchesBinomialLaw) {
  const auto a = constant_pair(20);
  const std::size_t trials = 10000;
  const double exact = oracle::binomial_window(20, 5.0 / 40.0, 5);
  const double rate = extraction_success_probability(a, 1.9, 5, trials, 9);
  EXPECT_NEAR(rate, exact, 3 * std::sqrt(exact * (1 - exact) / double(trials)));
}

TEST(Extract, AcceptedSubsetsReverify) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto raw = gen_random_family(6, 12, {GeneratorKind::SignVectors}, seed);
    const auto a = raw.distinct_rows();
    if (a.size() < 2) continue;
    const double t = 0.999 * diameter(a, ProbabilityMeasure::uniform(12)) / 2;
    if (!is_separated(a, ProbabilityMeasure::uniform(12), t)) continue;
    for (std::uint64_t attempt = 0; attempt < 50; ++attempt) {
      const auto draw = extraction_draw(a, t, 8, seed, attempt);
      if (!draw.accepted) continue;
      const auto r = a.restrict_to(draw.subset);
      EXPECT_TRUE(is_separated(r, ProbabilityMeasure::uniform(r.domain_size()), t / 2));
      EXPECT_LE(draw.subset.size(), 8u);
    }
  }
}

TEST(Extract, Deterministic) {
  const auto a = gen_random_family(5, 16, {GeneratorKind::SignVectors}, 4).distinct_rows();
  const double t = 0.9 * min_separation_on(a, CoordinateSubset::all(16));
  ASSERT_TRUE(is_separated(a, ProbabilityMeasure::uniform(16), t));
  const auto x = extract_coordinates(a, t, 8, 77, 1000);
  const auto y = extract_coordinates(a, t, 8, 77, 1000);
  EXPECT_EQ(x.subset, y.subset);
  EXPECT_EQ(x.attempts, y.attempts);
  EXPECT_EQ(extraction_success_probability(a, t, 8, 2000, 3, 1),
            extraction_success_probability(a, t, 8, 2000, 3, 4));
}

TEST(Extract, SuccessGrowsWithK) {
  const auto a = gen_random_family(6, 16, {GeneratorKind::SignVectors}, 8).distinct_rows();
  const double t = 0.9 * min_separation_on(a, CoordinateSubset::all(16));
  ASSERT_TRUE(is_separated(a, ProbabilityMeasure::uniform(16), t));
  const auto curve = extraction_curve(a, t, {1, 2, 4, 8}, 10000, 12);
  for (std::size_t j = 1; j < curve.size(); ++j) {
    const double se = std::hypot(curve[j].standard_error, curve[j - 1].standard_error);
    EXPECT_GE(curve[j].success_rate, curve[j - 1].success_rate - 3 * se);
  }
}

TEST(Extract, MinSeparationOnSubset) {
  const auto a = FunctionFamily::real({{1, 0, 0}, {-1, 0, 0}});
  EXPECT_DOUBLE_EQ(min_separation_on(a, CoordinateSubset({0, 1})), std::sqrt(2.0));
  EXPECT_TRUE(std::isinf(min_separation_on(FunctionFamily::real({{0.5}}), CoordinateSubset({0}))));
}

TEST(Extract, ConstantEstimate) {
  const auto a = constant_pair(20);
  const auto est = estimate_extraction_constant(a, 1.9, 4000, 2);
  EXPECT_GE(est.success_rate, 0.5);
  EXPECT_GE(est.k_half, 1u);
  EXPECT_NEAR(est.constant, std::log(4.0) / (std::pow(1.9, 4) * double(est.k_half)), 1e-12);
}
