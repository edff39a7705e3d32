#include <gtest/gtest.h>

#include <cmath>

#include "combdim/class_model.hpp"
#include "combdim/errors.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/random.hpp"
#include "combdim/separation_tree.hpp"
#include "combdim/shattering.hpp"
#include "oracles.hpp"

using namespace combdim;

namespace {

Distribution random_distribution(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t atoms = 1 + rng.below(8);
  std::vector<double> p(atoms);
  double total = 0.0;
  for (auto& x : p) total += (x = rng.uniform(0.01, 1.0));
  std::vector<Distribution::Atom> out;
  double sum = 0.0;
  for (std::size_t k = 0; k < atoms; ++k) {
    const double pk = k + 1 == atoms ? 1.0 - sum : p[k] / total;
    sum += pk;
    out.push_back({rng.uniform(-3.0, 3.0), pk});
  }
  return Distribution(out);
}

FunctionFamily separated_instance(std::uint64_t seed, double t) {
  const std::size_t m = 2 + seed % 15, n = 2 + seed % 6;
  const auto kind = seed % 2 ? GeneratorKind::UniformReal : GeneratorKind::SignVectors;
  const auto raw = gen_random_family(m, n, {kind}, seed);
  const auto w = oracle::uniform_weights(n);
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < raw.size(); ++r) {
    bool ok = true;
    for (std::size_t k : kept) ok = ok && oracle::l2(raw, r, k, w) > t;
    if (ok) kept.push_back(r);
  }
  return raw.select_rows(kept);
}

}  // namespace

TEST(Variance, Examples) {
  const auto coin = Distribution::empirical({0.0, 1.0});
  EXPECT_DOUBLE_EQ(variance(coin).variance, 0.25);
  EXPECT_DOUBLE_EQ(variance(coin).pair_expectation, 0.5);
  const auto point = Distribution({{3.0, 1.0}});
  EXPECT_EQ(variance(point).variance, 0.0);
  EXPECT_EQ(variance(point).pair_expectation, 0.0);
  const auto skew = Distribution({{0.0, 0.75}, {1.0, 0.25}});
  EXPECT_DOUBLE_EQ(variance(skew).variance, 0.75 * 0.25);
  EXPECT_DOUBLE_EQ(variance(skew).pair_expectation, 2 * 0.75 * 0.25);
}

TEST(Variance, PairIdentityAndMeanMinimises) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto d = random_distribution(seed);
    const auto v = variance(d);
    EXPECT_NEAR(v.pair_expectation, 2 * v.variance, 1e-12);
    // Golden-section search of a -> E|X - a|^2.
    double lo = -3.0, hi = 3.0;
    const double r = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
      if (d.mean_square_deviation(a) < d.mean_square_deviation(b)) hi = b; else lo = a;
    }
    EXPECT_NEAR(2 * d.mean_square_deviation((lo + hi) / 2), 2 * v.variance, 1e-9);
    EXPECT_NEAR((lo + hi) / 2, d.mean(), 1e-6);
  }
}

TEST(Distribution, RejectsBadProbabilities) {
  EXPECT_THROW(Distribution({{0.0, 0.5}}), PreconditionError);
  EXPECT_THROW(Distribution({{0.0, 1.5}, {1.0, -0.5}}), PreconditionError);
}

TEST(SmallDevSplit, SymmetricTwoPoint) {
  const auto d = Distribution::empirical({-1.0, 1.0});
  const auto c = small_dev_split(d);
  EXPECT_DOUBLE_EQ(c.threshold, 0.0);
  EXPECT_DOUBLE_EQ(c.beta, 0.5);
  EXPECT_EQ(c.side, SplitSide::UpperHeavy);
  EXPECT_DOUBLE_EQ(c.gap_halfwidth, 1.0 / 6.0);
  EXPECT_TRUE(certificate_holds(d, c));
}

TEST(SmallDevSplit, SkewedTwoPoint) {
  const auto d = Distribution({{0.0, 0.75}, {1.0, 0.25}});
  const auto c = small_dev_split(d);
  EXPECT_NEAR(c.gap_halfwidth, std::sqrt(3.0) / 4 / 6, 1e-15);
  EXPECT_DOUBLE_EQ(c.threshold, 0.5);
  EXPECT_EQ(c.side, SplitSide::LowerHeavy);
  EXPECT_DOUBLE_EQ(c.p_lower, 0.75);
  EXPECT_DOUBLE_EQ(c.p_upper, 0.25);
  // The margin-balancing rule picks beta = 1/3; beta = 1/2 is valid too.
  EXPECT_NEAR(c.beta, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(certificate_holds(d, c));
  auto half = c;
  half.beta = 0.5;
  EXPECT_TRUE(certificate_holds(d, half));
}

TEST(SmallDevSplit, PointMassIsRejected) {
  EXPECT_THROW(small_dev_split(Distribution({{3.0, 1.0}})), PreconditionError);
}

TEST(SmallDevSplit, CertificatesHoldOnRandomDistributions) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto d = random_distribution(seed);
    if (variance(d).variance == 0.0) continue;
    const auto c = small_dev_split(d);
    EXPECT_TRUE(certificate_holds(d, c)) << seed;
    EXPECT_NEAR(c.gap_halfwidth, std::sqrt(variance(d).variance) / 6, 1e-12);
    // Independent recount of the tails.
    double up = 0.0, down = 0.0;
    for (const auto& a : d.atoms()) {
      if (a.value > c.threshold + c.gap_halfwidth) up += a.probability;
      if (a.value < c.threshold - c.gap_halfwidth) down += a.probability;
    }
    const double heavy = c.side == SplitSide::UpperHeavy ? up : down;
    const double light = c.side == SplitSide::UpperHeavy ? down : up;
    EXPECT_GT(c.beta, 0.0);
    EXPECT_LE(c.beta, 0.5);
    EXPECT_GE(heavy, 1 - c.beta - 1e-12);
    EXPECT_GE(light, c.beta / 2 - 1e-12);
  }
}

TEST(CertificateHolds, DetectsForgery) {
  const auto d = Distribution({{0.0, 0.75}, {1.0, 0.25}});
  auto c = small_dev_split(d);
  c.side = SplitSide::UpperHeavy;
  EXPECT_FALSE(certificate_holds(d, c));
}

TEST(FindSeparatingCoordinate, Examples) {
  const auto mu = ProbabilityMeasure::uniform(2);
  const auto a = FunctionFamily::real({{1, 0}, {-1, 0}});
  const auto s = find_separating_coordinate(a, mu, 1.4);
  EXPECT_EQ(s.coordinate, 0u);
  EXPECT_DOUBLE_EQ(s.deviation, 1.0);
  EXPECT_DOUBLE_EQ(s.certificate.threshold, 0.0);
  EXPECT_DOUBLE_EQ(s.certificate.gap_halfwidth, 1.4 / 12);
  EXPECT_EQ(find_separating_coordinate(FunctionFamily::real({{1, 1}, {-1, -1}}), mu, 1.9).coordinate, 0u);
  EXPECT_THROW(find_separating_coordinate(FunctionFamily::real({{0.5, 0.5}, {0.5, 0.5}}), mu, 0.3),
               PreconditionError);
  EXPECT_THROW(find_separating_coordinate(FunctionFamily::real({{0.5, 0.5}}), mu, 0.3), PreconditionError);
}

TEST(FindSeparatingCoordinate, DeviationBoundHolds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double t = 0.3 + 0.05 * double(seed % 6);
    const auto a = separated_instance(seed, t);
    if (a.size() < 2) continue;
    const auto s = find_separating_coordinate(a, ProbabilityMeasure::uniform(a.domain_size()), t);
    std::vector<double> column;
    for (std::size_t r = 0; r < a.size(); ++r) column.push_back(a(r, s.coordinate));
    const auto d = Distribution::empirical(column);
    EXPECT_GE(s.deviation, t / 2 - 1e-12);
    auto cert = s.certificate;
    EXPECT_DOUBLE_EQ(cert.gap_halfwidth, t / 12);
    EXPECT_TRUE(certificate_holds(d, cert));
  }
}

TEST(SeparatingTree, SignSquare) {
  const auto a = FunctionFamily::real({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  const auto tree = build_separating_tree(a, ProbabilityMeasure::uniform(2), 1.4);
  EXPECT_EQ(tree.leaf_count(), 4u);
  EXPECT_EQ(tree.depth(), 2u);
  ASSERT_TRUE(tree.nodes[0].split.has_value());
  EXPECT_EQ(tree.nodes[0].split->coordinate, 0u);
  const auto& plus = tree.nodes[tree.nodes[0].split->plus_son];
  ASSERT_TRUE(plus.split.has_value());
  EXPECT_EQ(plus.split->coordinate, 1u);
  EXPECT_TRUE(validate_tree(tree, a, 1.4 / 6));
  // The true gap on the square is 2, so the check fails only past it.
  EXPECT_TRUE(validate_tree(tree, a, 2 * 1.4 / 6));
  EXPECT_TRUE(validate_tree(tree, a, 1.99));
  EXPECT_FALSE(validate_tree(tree, a, 2.0));
}

TEST(SeparatingTree, DegenerateSizes) {
  const auto pair = FunctionFamily::real({{0.5, 0.5}, {-0.5, -0.5}});
  const auto tree = build_separating_tree(pair, ProbabilityMeasure::uniform(2), 0.9);
  EXPECT_EQ(tree.leaf_count(), 2u);
  EXPECT_EQ(tree.nodes.size(), 3u);
  const auto single = build_separating_tree(FunctionFamily::real({{0.5}}), ProbabilityMeasure::uniform(1), 0.3);
  EXPECT_EQ(single.leaf_count(), 1u);
  EXPECT_TRUE(validate_tree(single, FunctionFamily::real({{0.5}}), 100.0));
}

TEST(ValidateTree, OverlappingSonsAreRejected) {
  const auto a = FunctionFamily::real({{1.0}, {-1.0}});
  SeparatingTree tree;
  tree.nodes.push_back(TreeNode{{0, 1}, TreeNode::Split{0, 0.0, 0.1, 1, 2}});
  tree.nodes.push_back(TreeNode{{0}, std::nullopt});
  tree.nodes.push_back(TreeNode{{0}, std::nullopt});
  const auto v = validate_tree(tree, a, 0.1);
  EXPECT_FALSE(v.ok);
  EXPECT_FALSE(v.message.empty());
  tree.nodes[2].rows = {1};
  EXPECT_TRUE(validate_tree(tree, a, 0.1));
  std::swap(tree.nodes[0].split->plus_son, tree.nodes[0].split->minus_son);
  EXPECT_FALSE(validate_tree(tree, a, 0.1));
}

TEST(SeparatingTree, LeafBoundAndGapOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const double t = 0.2 + 0.1 * double(seed % 5);
    const auto a = separated_instance(seed, t);
    const auto tree = build_separating_tree(a, ProbabilityMeasure::uniform(a.domain_size()), t);
    EXPECT_GE(double(tree.leaf_count() * tree.leaf_count()), double(a.size())) << seed;
    EXPECT_TRUE(validate_tree(tree, a, t / 6)) << seed;
  }
}

TEST(SeparatingTree, CentreCountDominatesLeaves) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; checked < 40; ++seed) {
    const auto raw = gen_random_family(12, 4, {GeneratorKind::IntegerGrid, 8}, seed);
    const auto w = oracle::uniform_weights(4);
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < raw.size(); ++r) {
      bool ok = true;
      for (std::size_t k : kept) ok = ok && oracle::l2(raw, r, k, w) > 6.0;
      if (ok) kept.push_back(r);
    }
    const auto a = raw.select_rows(kept);
    if (a.size() < 2) continue;
    ++checked;
    const auto tree = build_separating_tree(a, ProbabilityMeasure::uniform(4), 6.0);
    ASSERT_TRUE(validate_tree(tree, a, 1.0));
    EXPECT_GE(oracle::center_count(a), tree.leaf_count());
  }
}
