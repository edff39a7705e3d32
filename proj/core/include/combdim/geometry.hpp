#ifndef COMBDIM_GEOMETRY_HPP
#define COMBDIM_GEOMETRY_HPP

// V-polytopes, polyhedral norms, and the LP certificates built on them:
// hull membership, cubes inside coordinate projections, the convex shattering
// dimension, and l1-equivalence constants of vector systems.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/lp.hpp"

namespace combdim {

inline constexpr std::size_t kDefaultExponentBudget = 15;
inline constexpr double kGeometryTolerance = 1e-9;

class VPolytope {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  VPolytope() = default;
  // Throws PreconditionError with no vertices, InvariantViolation if
  // `symmetric` is set but some -v is missing from the vertex list.
  VPolytope(PointSet vertices, bool symmetric);
  // conv{+-p : p in points}, flagged symmetric.
  static VPolytope symmetric_hull(const PointSet& points);

  std::size_t dimension() const { return vertices_.cols(); }
  const PointSet& vertices() const { return vertices_; }
  bool symmetric() const { return symmetric_; }

  // Vertices of the projection P_sigma (hull of the projected vertices).
  PointSet project(const CoordinateSubset& sigma) const;
  // Largest |v(i)| over vertices and coordinates.
  double max_extent() const;

 private:
  PointSet vertices_;
  bool symmetric_ = false;
};

// ||x|| = max_j |<f_j, x>|.
class PolyhedralNorm {
 public:
  PolyhedralNorm() = default;
  // Throws PreconditionError unless the functionals span R^n.
  explicit PolyhedralNorm(PointSet functionals);

  std::size_t dimension() const { return functionals_.cols(); }
  const PointSet& functionals() const { return functionals_; }
  double operator()(std::span<const double> x) const;
  // conv{+-f_j}: the unit ball of the dual norm.
  VPolytope dual_ball() const;

 private:
  PointSet functionals_;
};

// Numerical rank by Gaussian elimination with partial pivoting.
std::size_t matrix_rank(const PointSet& rows, double tolerance = 1e-10);

VPolytope parse_polytope(const std::string& json_text);
VPolytope load_polytope(const std::filesystem::path& path);
PolyhedralNorm parse_norm(const std::string& json_text);
PolyhedralNorm load_norm(const std::filesystem::path& path);
// {"vectors": [[...], ...]} or a bare array of rows.
PointSet parse_vectors(const std::string& json_text);
PointSet load_vectors(const std::filesystem::path& path);

struct HullMembership {
  bool inside = false;
  double residual = 0.0;        // l1 distance from the point to the hull
  std::vector<double> weights;  // convex weights of the closest combination
};

// Minimises ||V^T lambda - p||_1 over the simplex; inside iff the residual is
// at most kGeometryTolerance. Boundary points count as inside.
HullMembership point_in_hull(const PointSet& vertices, std::span<const double> point);
HullMembership point_in_hull(const VPolytope& poly, std::span<const double> point);

struct CubeTest {
  bool contained = false;
  // Centre h of the cube h + [-t/2, t/2]^sigma inside P_sigma (zero in
  // centred mode); the [0, t] form of the corner is h - t/2.
  std::vector<double> translation;
  double worst_residual = 0.0;  // largest corner residual (centred mode)
  std::size_t lp_solves = 0;
};

// Centred mode checks the corners of [-t/2, t/2]^sigma for membership in
// P_sigma(poly) (half of them for symmetric bodies); translated mode solves
// one LP for a shared translation. Throws PreconditionError for t <= 0 or
// |sigma| above `exponent_budget`.
CubeTest cube_in_projection(const VPolytope& poly, const CoordinateSubset& sigma, double t, bool translated,
                            std::size_t exponent_budget = kDefaultExponentBudget);

struct ConvexVcResult {
  std::size_t dimension = 0;
  CoordinateSubset support;  // lexicographically smallest maximiser
  std::vector<double> translation;
  std::size_t cube_tests = 0;
};

// Largest |sigma| with cube_in_projection true. Containment is inherited by
// subsets, so a depth-first search in lexicographic order that only extends
// passing sets is exhaustive. Throws PreconditionError for a non-symmetric
// body in centred mode and BudgetExceeded after `max_cube_tests` tests.
ConvexVcResult convex_vc(const VPolytope& poly, double t, bool translated = false,
                         std::size_t max_cube_tests = 100000,
                         std::size_t exponent_budget = kDefaultExponentBudget);

struct Ell1Constant {
  double value = 0.0;
  // Minimising coefficients a on sigma (sum |a_i| = 1), in sigma order.
  std::vector<double> coefficients;
  std::size_t lp_solves = 0;
};

// min { ||sum_{i in sigma} a_i x_i|| : sum |a_i| = 1 }, x_i = rows of
// `vectors`. Solved per sign orthant (theta_0 = +1 suffices by symmetry) via
// the dual LP max{w : w <= theta_i z_i, z in conv(+-b_j)} with
// b_j = (<f_j, x_i>)_i. Throws PreconditionError for an empty sigma or one
// above the exponent budget.
Ell1Constant ell1_lower_constant(const PolyhedralNorm& norm, const PointSet& vectors, const CoordinateSubset& sigma,
                                 unsigned jobs = 1, std::size_t exponent_budget = kDefaultExponentBudget);

// Same constant through the primal min-max LP
// min{s : |<b_j, theta o lambda>| <= s, lambda in simplex}; independent of
// the dual route and used to re-prove certified values.
Ell1Constant ell1_lower_constant_primal(const PolyhedralNorm& norm, const PointSet& vectors,
                                        const CoordinateSubset& sigma,
                                        std::size_t exponent_budget = kDefaultExponentBudget);

}  // namespace combdim

#endif  // COMBDIM_GEOMETRY_HPP
