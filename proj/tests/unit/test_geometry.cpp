#include <gtest/gtest.h>

#include <cmath>

#include "combdim/errors.hpp"
#include "combdim/geometry.hpp"
#include "combdim/random.hpp"

using namespace combdim;

namespace {

VPolytope square() { return VPolytope::symmetric_hull(PointSet::from_rows({{1, 1}, {1, -1}})); }
VPolytope cross() { return VPolytope::symmetric_hull(PointSet::from_rows({{1, 0}, {0, 1}})); }

PointSet identity(std::size_t n) {
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
  return PointSet(n, n, data);
}

PointSet sign_functionals(std::size_t n) {
  std::vector<std::vector<double>> rows;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = (mask >> i & 1) ? 1.0 : -1.0;
    rows.push_back(r);
  }
  return PointSet::from_rows(rows);
}

PointSet random_points(std::size_t count, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> data(count * n);
  for (auto& v : data) v = rng.uniform(-1, 1);
  return PointSet(count, n, data);
}

// min over the l1 sphere in R^2 or R^3 of ||sum a_i x_i||, by a grid on its faces.
double grid_ell1_constant(const PolyhedralNorm& norm, const PointSet& x, std::size_t steps) {
  const std::size_t k = x.rows(), n = x.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> a(k), v(n);
  auto eval = [&] {
    for (std::size_t c = 0; c < n; ++c) {
      v[c] = 0.0;
      for (std::size_t i = 0; i < k; ++i) v[c] += a[i] * x(i, c);
    }
    best = std::min(best, norm(v));
  };
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << k); ++signs) {
    const auto s = [&](std::size_t i) { return (signs >> i & 1) ? -1.0 : 1.0; };
    if (k == 2) {
      for (std::size_t u = 0; u <= steps; ++u) {
        const double p = double(u) / double(steps);
        a = {s(0) * p, s(1) * (1 - p)};
        eval();
      }
    } else {
      for (std::size_t u = 0; u <= steps; ++u) {
        for (std::size_t w = 0; u + w <= steps; ++w) {
          const double p = double(u) / double(steps), q = double(w) / double(steps);
          a = {s(0) * p, s(1) * q, s(2) * (1 - p - q)};
          eval();
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST(VPolytope, SymmetryIsChecked) {
  EXPECT_THROW(VPolytope(PointSet::from_rows({{1, 0}, {0, 1}}), true), InvariantViolation);
  EXPECT_THROW(VPolytope(PointSet(), false), PreconditionError);
  EXPECT_EQ(square().vertices().rows(), 4u);
  EXPECT_DOUBLE_EQ(square().max_extent(), 1.0);
}

TEST(PolyhedralNorm, RankAndEvaluation) {
  EXPECT_THROW(PolyhedralNorm(PointSet::from_rows({{1, 1}, {2, 2}})), PreconditionError);
  const PolyhedralNorm max_norm(identity(2));
  const std::vector<double> x = {0.3, -0.7};
  EXPECT_DOUBLE_EQ(max_norm(x), 0.7);
  EXPECT_EQ(matrix_rank(PointSet::from_rows({{1, 2, 3}, {2, 4, 6}, {0, 1, 0}})), 2u);
}

TEST(GeometryIo, ParseForms) {
  EXPECT_EQ(parse_vectors("[[1, 0], [0, 1]]"), identity(2));
  EXPECT_EQ(parse_vectors(R"({"vectors": [[1, 0], [0, 1]]})"), identity(2));
  EXPECT_THROW(parse_vectors(R"({"vectors": [[1, 0], [0]]})"), ParseError);
  const auto poly = parse_polytope(R"({"dimension": 2, "vertices": [[1, 0], [-1, 0], [0, 1], [0, -1]], "symmetric": true})");
  EXPECT_TRUE(poly.symmetric());
  const auto norm = parse_norm(R"({"dimension": 2, "functionals": [[1, 0], [0, 1]]})");
  EXPECT_EQ(norm.dimension(), 2u);
}

TEST(PointInHull, Examples) {
  const std::vector<double> origin = {0, 0}, outside = {1.001, 0}, boundary = {0.5, 0.5};
  EXPECT_TRUE(point_in_hull(square(), origin).inside);
  const auto out = point_in_hull(square(), outside);
  EXPECT_FALSE(out.inside);
  EXPECT_NEAR(out.residual, 0.001, 1e-9);
  const auto on = point_in_hull(cross(), boundary);
  EXPECT_TRUE(on.inside);
  // The weights reproduce the point.
  double x = 0, y = 0, total = 0;
  const auto body = cross();
  const auto& v = body.vertices();
  for (std::size_t j = 0; j < v.rows(); ++j) {
    EXPECT_GE(on.weights[j], -1e-12);
    total += on.weights[j];
    x += on.weights[j] * v(j, 0);
    y += on.weights[j] * v(j, 1);
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_NEAR(x, 0.5, 1e-9);
  EXPECT_NEAR(y, 0.5, 1e-9);
}

TEST(CubeInProjection, Examples) {
  EXPECT_TRUE(cube_in_projection(square(), CoordinateSubset({0, 1}), 2.0, false).contained);
  EXPECT_TRUE(cube_in_projection(cross(), CoordinateSubset({0, 1}), 1.0, false).contained);
  EXPECT_FALSE(cube_in_projection(cross(), CoordinateSubset({0, 1}), 1.001, false).contained);
  EXPECT_TRUE(cube_in_projection(cross(), CoordinateSubset({0}), 2.0, false).contained);
  EXPECT_THROW(cube_in_projection(cross(), CoordinateSubset({0}), 0.0, false), PreconditionError);
}

TEST(CubeInProjection, TranslatedOnNonSymmetricBody) {
  const VPolytope triangle(PointSet::from_rows({{0, 0}, {2, 0}, {0, 2}}), false);
  const auto fit = cube_in_projection(triangle, CoordinateSubset({0, 1}), 1.0, true);
  ASSERT_TRUE(fit.contained);
  ASSERT_EQ(fit.translation.size(), 2u);
  // Every corner of h + [-1/2, 1/2]^2 lies in the triangle.
  for (double dx : {-0.5, 0.5}) {
    for (double dy : {-0.5, 0.5}) {
      const double x = fit.translation[0] + dx, y = fit.translation[1] + dy;
      EXPECT_GE(x, -1e-9);
      EXPECT_GE(y, -1e-9);
      EXPECT_LE(x + y, 2 + 1e-9);
    }
  }
  EXPECT_FALSE(cube_in_projection(triangle, CoordinateSubset({0, 1}), 1.01, true).contained);
  EXPECT_THROW(convex_vc(triangle, 0.5, false), PreconditionError);
  EXPECT_EQ(convex_vc(triangle, 1.0, true).dimension, 2u);
  EXPECT_EQ(convex_vc(triangle, 1.5, true).dimension, 1u);
}

TEST(CubeInProjection, TranslatedEqualsCentredOnSymmetricBodies) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto body = VPolytope::symmetric_hull(random_points(4, 3, seed));
    for (double t : {0.2, 0.6, 1.0}) {
      for (std::uint64_t mask = 1; mask < 8; ++mask) {
        const auto sigma = CoordinateSubset::from_mask(mask);
        EXPECT_EQ(cube_in_projection(body, sigma, t, false).contained,
                  cube_in_projection(body, sigma, t, true).contained);
      }
    }
  }
}

TEST(CubeInProjection, Monotone) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto body = VPolytope::symmetric_hull(random_points(5, 3, seed + 50));
    for (std::uint64_t mask = 1; mask < 8; ++mask) {
      const auto sigma = CoordinateSubset::from_mask(mask);
      for (double t : {0.3, 0.7, 1.1}) {
        if (!cube_in_projection(body, sigma, t, false).contained) continue;
        EXPECT_TRUE(cube_in_projection(body, sigma, t * 0.8, false).contained);
        for (std::uint64_t sub = 1; sub < 8; ++sub) {
          if ((sub & mask) == sub) {
            EXPECT_TRUE(cube_in_projection(body, CoordinateSubset::from_mask(sub), t, false).contained);
          }
        }
      }
    }
  }
}

TEST(ConvexVc, Examples) {
  const auto s = convex_vc(square(), 1.0);
  EXPECT_EQ(s.dimension, 2u);
  EXPECT_EQ(s.support, CoordinateSubset({0, 1}));
  const auto c = convex_vc(cross(), 1.5);
  EXPECT_EQ(c.dimension, 1u);
  EXPECT_EQ(c.support, CoordinateSubset({0}));
  EXPECT_EQ(convex_vc(square(), 2.01).dimension, 0u);
  EXPECT_TRUE(convex_vc(square(), 2.01).support.empty());
}

TEST(ConvexVc, MatchesExhaustiveSubsetScan) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const auto body = VPolytope::symmetric_hull(random_points(n + 2, n, seed + 7));
    for (double t : {0.25, 0.5, 0.9, 1.4}) {
      std::size_t best = 0;
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto sigma = CoordinateSubset::from_mask(mask);
        if (cube_in_projection(body, sigma, t, false).contained) best = std::max(best, sigma.size());
      }
      const auto r = convex_vc(body, t);
      EXPECT_EQ(r.dimension, best);
      if (r.dimension > 0) {
        // Corners of the found cube, checked one by one through their hull weights.
        const auto proj = body.project(r.support);
        for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << r.dimension); ++corner) {
          std::vector<double> p(r.dimension);
          for (std::size_t k = 0; k < r.dimension; ++k) p[k] = (corner >> k & 1) ? t / 2 : -t / 2;
          const auto h = point_in_hull(proj, p);
          EXPECT_TRUE(h.inside);
        }
      }
    }
  }
}

TEST(ConvexVc, BudgetIsEnforced) {
  const auto body = VPolytope::symmetric_hull(random_points(8, 6, 2));
  EXPECT_THROW(convex_vc(body, 0.05, false, 3), BudgetExceeded);
}

TEST(Ell1Constant, Examples) {
  for (std::size_t n : {2u, 3u, 4u}) {
    const PolyhedralNorm l1(sign_functionals(n));
    const auto c = ell1_lower_constant(l1, identity(n), CoordinateSubset::all(n));
    EXPECT_NEAR(c.value, 1.0, 1e-9);
  }
  const PolyhedralNorm max_norm(identity(2));
  const auto m = ell1_lower_constant(max_norm, identity(2), CoordinateSubset({0, 1}));
  EXPECT_NEAR(m.value, 0.5, 1e-9);
  ASSERT_EQ(m.coefficients.size(), 2u);
  EXPECT_NEAR(std::abs(m.coefficients[0]), 0.5, 1e-9);
  EXPECT_NEAR(std::abs(m.coefficients[1]), 0.5, 1e-9);
  const auto same = PointSet::from_rows({{1, 0}, {1, 0}});
  EXPECT_NEAR(ell1_lower_constant(max_norm, same, CoordinateSubset({0, 1})).value, 0.0, 1e-9);
  EXPECT_NEAR(ell1_lower_constant_primal(max_norm, same, CoordinateSubset({0, 1})).value, 0.0, 1e-9);
  EXPECT_THROW(ell1_lower_constant(max_norm, same, CoordinateSubset()), PreconditionError);
}

TEST(Ell1Constant, CoefficientsAttainTheValue) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PolyhedralNorm norm(random_points(6, 3, seed));
    const auto x = random_points(4, 3, seed + 1000);
    const auto sigma = CoordinateSubset({0, 2, 3});
    const auto c = ell1_lower_constant(norm, x, sigma);
    double l1 = 0.0;
    std::vector<double> v(3, 0.0);
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      l1 += std::abs(c.coefficients[k]);
      for (std::size_t j = 0; j < 3; ++j) v[j] += c.coefficients[k] * x(sigma[k], j);
    }
    EXPECT_NEAR(l1, 1.0, 1e-9);
    EXPECT_NEAR(norm(v), c.value, 1e-8);
  }
}

TEST(Ell1Constant, DualPrimalAndGridAgree) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t k = 2 + seed % 2;
    const PolyhedralNorm norm(random_points(5, 3, seed + 300));
    const auto x = random_points(k, 3, seed + 400);
    const auto sigma = CoordinateSubset::all(k);
    const double dual = ell1_lower_constant(norm, x, sigma).value;
    const double primal = ell1_lower_constant_primal(norm, x, sigma).value;
    EXPECT_NEAR(dual, primal, 1e-8);
    const std::size_t steps = k == 2 ? 200000 : 600;
    const double grid = grid_ell1_constant(norm, x, steps);
    // The grid minimum is an upper bound within Lipschitz * mesh of the truth.
    double lip = 0.0;
    for (std::size_t i = 0; i < k; ++i) lip = std::max(lip, norm(x.row(i)));
    EXPECT_LE(dual, grid + 1e-9);
    EXPECT_GE(dual, grid - 2 * lip / double(steps) - 1e-9);
  }
}

TEST(Ell1Constant, JobsDoNotChangeTheAnswer) {
  const PolyhedralNorm norm(random_points(7, 4, 9));
  const auto x = random_points(4, 4, 10);
  const auto a = ell1_lower_constant(norm, x, CoordinateSubset::all(4), 1);
  const auto b = ell1_lower_constant(norm, x, CoordinateSubset::all(4), 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(Duality, CubeInBodyGivesEll1Bound) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const auto pts = random_points(n + 2, n, seed + 600);
    const auto body = VPolytope::symmetric_hull(pts);
    const PolyhedralNorm norm(pts);  // unit ball is the polar of `body`
    for (double t : {0.2, 0.5, 0.8}) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto sigma = CoordinateSubset::from_mask(mask);
        if (!cube_in_projection(body, sigma, t, false).contained) continue;
        EXPECT_GE(ell1_lower_constant(norm, identity(n), sigma).value, t / 2 - 1e-6);
      }
    }
  }
}
