#include "combdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "combdim/errors.hpp"
#include "combdim/parallel.hpp"
#include "json_io.hpp"

namespace combdim {

// ---------------------------------------------------------------------------
// Bodies and norms

VPolytope::VPolytope(PointSet vertices, bool symmetric) : vertices_(std::move(vertices)), symmetric_(symmetric) {
  if (vertices_.rows() == 0 || vertices_.cols() == 0) {
    throw PreconditionError("VPolytope: need at least one vertex of positive dimension");
  }
  for (double v : vertices_.data()) {
    if (!std::isfinite(v)) throw PreconditionError("VPolytope: non-finite vertex coordinate");
  }
  if (!symmetric_) return;
  for (std::size_t r = 0; r < vertices_.rows(); ++r) {
    bool found = false;
    for (std::size_t s = 0; s < vertices_.rows() && !found; ++s) {
      bool match = true;
      for (std::size_t c = 0; c < vertices_.cols() && match; ++c) {
        match = std::abs(vertices_(r, c) + vertices_(s, c)) <= kSymmetryTolerance;
      }
      found = match;
    }
    if (!found) throw InvariantViolation("VPolytope: symmetric body lacks the negation of vertex", r);
  }
}

VPolytope VPolytope::symmetric_hull(const PointSet& points) {
  std::vector<double> data;
  data.reserve(2 * points.data().size());
  for (std::size_t r = 0; r < points.rows(); ++r) {
    for (double v : points.row(r)) data.push_back(v);
  }
  for (std::size_t r = 0; r < points.rows(); ++r) {
    for (double v : points.row(r)) data.push_back(-v);
  }
  return VPolytope(PointSet(2 * points.rows(), points.cols(), std::move(data)), true);
}

PointSet VPolytope::project(const CoordinateSubset& sigma) const {
  sigma.check_within(dimension());
  std::vector<double> data;
  data.reserve(vertices_.rows() * sigma.size());
  for (std::size_t r = 0; r < vertices_.rows(); ++r) {
    for (std::size_t c : sigma) data.push_back(vertices_(r, c));
  }
  return PointSet(vertices_.rows(), sigma.size(), std::move(data));
}

double VPolytope::max_extent() const {
  double m = 0.0;
  for (double v : vertices_.data()) m = std::max(m, std::abs(v));
  return m;
}

std::size_t matrix_rank(const PointSet& rows, double tolerance) {
  const std::size_t m = rows.rows();
  const std::size_t n = rows.cols();
  std::vector<double> a = rows.data();
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < m; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (std::abs(a[pivot * n + col]) <= tolerance * scale) continue;
    for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[rank * n + c]);
    for (std::size_t r = rank + 1; r < m; ++r) {
      const double f = a[r * n + col] / a[rank * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[rank * n + c];
    }
    ++rank;
  }
  return rank;
}

PolyhedralNorm::PolyhedralNorm(PointSet functionals) : functionals_(std::move(functionals)) {
  if (functionals_.rows() == 0 || functionals_.cols() == 0) {
    throw PreconditionError("PolyhedralNorm: need at least one functional of positive dimension");
  }
  const std::size_t rank = matrix_rank(functionals_);
  if (rank < functionals_.cols()) {
    std::ostringstream os;
    os << "PolyhedralNorm: degenerate norm, functionals span dimension " << rank << " of " << functionals_.cols();
    throw PreconditionError(os.str());
  }
}

double PolyhedralNorm::operator()(std::span<const double> x) const {
  if (x.size() != dimension()) throw PreconditionError("PolyhedralNorm: dimension mismatch");
  double best = 0.0;
  for (std::size_t j = 0; j < functionals_.rows(); ++j) {
    double dot = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) dot += functionals_(j, c) * x[c];
    best = std::max(best, std::abs(dot));
  }
  return best;
}

VPolytope PolyhedralNorm::dual_ball() const { return VPolytope::symmetric_hull(functionals_); }

// ---------------------------------------------------------------------------
// JSON

namespace {

std::size_t read_dimension(const nlohmann::json& doc, const std::string& what) {
  if (!doc.is_object()) throw ParseError(what + ": top level must be an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer() || doc["dimension"].get<long long>() < 1) {
    throw ParseError(what + ": dimension must be a positive integer");
  }
  return doc["dimension"].get<std::size_t>();
}

}  // namespace

VPolytope parse_polytope(const std::string& json_text) {
  const auto doc = detail::parse_document(json_text, "polytope file");
  const std::size_t n = read_dimension(doc, "polytope file");
  if (!doc.contains("vertices")) throw ParseError("polytope file: missing key 'vertices'");
  bool symmetric = false;
  if (doc.contains("symmetric")) {
    if (!doc["symmetric"].is_boolean()) throw ParseError("polytope file: symmetric must be a boolean");
    symmetric = doc["symmetric"].get<bool>();
  }
  return VPolytope(detail::parse_rows(doc["vertices"], n, "polytope vertices"), symmetric);
}

VPolytope load_polytope(const std::filesystem::path& path) {
  return parse_polytope(detail::read_text_file(path, "polytope file"));
}

PolyhedralNorm parse_norm(const std::string& json_text) {
  const auto doc = detail::parse_document(json_text, "norm file");
  const std::size_t n = read_dimension(doc, "norm file");
  if (!doc.contains("functionals")) throw ParseError("norm file: missing key 'functionals'");
  return PolyhedralNorm(detail::parse_rows(doc["functionals"], n, "norm functionals"));
}

PolyhedralNorm load_norm(const std::filesystem::path& path) {
  return parse_norm(detail::read_text_file(path, "norm file"));
}

PointSet parse_vectors(const std::string& json_text) {
  const auto doc = detail::parse_document(json_text, "vectors file");
  if (doc.is_object()) {
    if (!doc.contains("vectors")) throw ParseError("vectors file: missing key 'vectors'");
    return detail::parse_rows(doc["vectors"], 0, "vectors");
  }
  return detail::parse_rows(doc, 0, "vectors");
}

PointSet load_vectors(const std::filesystem::path& path) {
  return parse_vectors(detail::read_text_file(path, "vectors file"));
}

// ---------------------------------------------------------------------------
// Hull membership and cubes

HullMembership point_in_hull(const PointSet& vertices, std::span<const double> point) {
  const std::size_t n = vertices.cols();
  const std::size_t nv = vertices.rows();
  if (point.size() != n) {
    std::ostringstream os;
    os << "point_in_hull: point has dimension " << point.size() << ", body has " << n;
    throw PreconditionError(os.str());
  }
  if (nv == 0) throw PreconditionError("point_in_hull: no vertices");
  // Variables: lambda (nv), s+ (n), s- (n).
  LPProblem lp;
  lp.num_variables = nv + 2 * n;
  lp.sense = Sense::Minimize;
  lp.objective.assign(lp.num_variables, 0.0);
  for (std::size_t k = nv; k < lp.num_variables; ++k) lp.objective[k] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    LinearConstraint con;
    con.coefficients.assign(lp.num_variables, 0.0);
    for (std::size_t v = 0; v < nv; ++v) con.coefficients[v] = vertices(v, i);
    con.coefficients[nv + i] = 1.0;
    con.coefficients[nv + n + i] = -1.0;
    con.relation = Relation::Equal;
    con.rhs = point[i];
    lp.constraints.push_back(std::move(con));
  }
  LinearConstraint simplex;
  simplex.coefficients.assign(lp.num_variables, 0.0);
  for (std::size_t v = 0; v < nv; ++v) simplex.coefficients[v] = 1.0;
  simplex.relation = Relation::Equal;
  simplex.rhs = 1.0;
  lp.constraints.push_back(std::move(simplex));

  const LPResult res = lp_solve(lp);
  if (res.status != LPStatus::Optimal) {
    throw AssertionFailure("point_in_hull", "LP ended with status " + to_string(res.status));
  }
  HullMembership out;
  out.residual = std::max(0.0, res.objective);
  out.inside = out.residual <= kGeometryTolerance;
  out.weights.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(nv));
  return out;
}

HullMembership point_in_hull(const VPolytope& poly, std::span<const double> point) {
  return point_in_hull(poly.vertices(), point);
}

namespace {

void check_exponent(std::size_t size, std::size_t budget, const char* what) {
  if (size > budget || size >= 63) {
    std::ostringstream os;
    os << what << ": |sigma| = " << size << " exceeds the exponent budget " << budget;
    throw PreconditionError(os.str());
  }
}

std::vector<double> corner(std::uint64_t mask, std::size_t k, double half) {
  std::vector<double> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = ((mask >> i) & 1U) != 0 ? half : -half;
  return c;
}

// One LP: shared free translation h and a convex combination per corner.
CubeTest translated_cube(const PointSet& projected, std::size_t k, double t) {
  const std::size_t nv = projected.rows();
  const std::uint64_t corners = std::uint64_t{1} << k;
  LPProblem lp;
  lp.num_variables = k + static_cast<std::size_t>(corners) * nv;
  lp.free_variables.assign(lp.num_variables, false);
  for (std::size_t i = 0; i < k; ++i) lp.free_variables[i] = true;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    const auto c = corner(mask, k, t / 2.0);
    const std::size_t base = k + static_cast<std::size_t>(mask) * nv;
    for (std::size_t i = 0; i < k; ++i) {
      LinearConstraint con;
      con.coefficients.assign(lp.num_variables, 0.0);
      for (std::size_t v = 0; v < nv; ++v) con.coefficients[base + v] = projected(v, i);
      con.coefficients[i] = -1.0;
      con.relation = Relation::Equal;
      con.rhs = c[i];
      lp.constraints.push_back(std::move(con));
    }
    LinearConstraint simplex;
    simplex.coefficients.assign(lp.num_variables, 0.0);
    for (std::size_t v = 0; v < nv; ++v) simplex.coefficients[base + v] = 1.0;
    simplex.relation = Relation::Equal;
    simplex.rhs = 1.0;
    lp.constraints.push_back(std::move(simplex));
  }
  const LPResult res = lp_solve(lp);
  if (res.status == LPStatus::IterationLimit) {
    throw AssertionFailure("cube_in_projection", "LP hit its iteration cap");
  }
  CubeTest out;
  out.lp_solves = 1;
  out.contained = res.status == LPStatus::Optimal;
  out.worst_residual = res.infeasibility;
  if (out.contained) out.translation.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

}  // namespace

CubeTest cube_in_projection(const VPolytope& poly, const CoordinateSubset& sigma, double t, bool translated,
                            std::size_t exponent_budget) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("cube_in_projection: t must be positive");
  check_exponent(sigma.size(), exponent_budget, "cube_in_projection");
  sigma.check_within(poly.dimension());
  const std::size_t k = sigma.size();
  CubeTest out;
  out.translation.assign(k, 0.0);
  if (k == 0) {
    out.contained = true;
    return out;
  }
  const PointSet projected = poly.project(sigma);
  // A symmetric body containing h + C also contains -h + C, hence C itself:
  // the centred test decides the translated question too.
  if (translated && !poly.symmetric()) {
    CubeTest tr = translated_cube(projected, k, t);
    if (!tr.contained) tr.translation.assign(k, 0.0);
    return tr;
  }
  const std::uint64_t corners = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    // For symmetric bodies corner -c is in iff c is; keep theta_0 = +1.
    if (poly.symmetric() && (mask & 1U) == 0) continue;
    const auto c = corner(mask, k, t / 2.0);
    const HullMembership hm = point_in_hull(projected, c);
    ++out.lp_solves;
    out.worst_residual = std::max(out.worst_residual, hm.residual);
    if (!hm.inside) {
      out.contained = false;
      return out;
    }
  }
  out.contained = true;
  return out;
}

ConvexVcResult convex_vc(const VPolytope& poly, double t, bool translated, std::size_t max_cube_tests,
                         std::size_t exponent_budget) {
  if (!poly.symmetric() && !translated) {
    throw PreconditionError("convex_vc: centred mode needs a symmetric body (use translated mode)");
  }
  if (!(t > 0.0)) throw PreconditionError("convex_vc: t must be positive");
  const std::size_t n = poly.dimension();
  ConvexVcResult best;
  std::vector<std::size_t> current;
  std::vector<double> best_translation;

  auto test = [&](const std::vector<std::size_t>& cand) {
    if (best.cube_tests >= max_cube_tests) {
      std::ostringstream os;
      os << "convex_vc: more than " << max_cube_tests << " cube tests";
      throw BudgetExceeded(os.str());
    }
    ++best.cube_tests;
    return cube_in_projection(poly, CoordinateSubset(cand), t, translated, exponent_budget);
  };

  auto dfs = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t j = start; j < n; ++j) {
      // Even taking every remaining coordinate cannot beat the incumbent.
      if (current.size() + (n - j) <= best.dimension) return;
      if (current.size() + 1 > exponent_budget) return;
      current.push_back(j);
      const CubeTest ct = test(current);
      if (ct.contained) {
        if (current.size() > best.dimension) {
          best.dimension = current.size();
          best.support = CoordinateSubset(current);
          best.translation = ct.translation;
        }
        self(self, j + 1);
      }
      current.pop_back();
    }
  };
  dfs(dfs, 0);
  return best;
}

// ---------------------------------------------------------------------------
// l1-equivalence constants

namespace {

// b[j][k] = <f_j, x_{sigma_k}>, row-major J x k.
std::vector<double> functional_images(const PolyhedralNorm& norm, const PointSet& vectors,
                                      const CoordinateSubset& sigma) {
  if (vectors.cols() != norm.dimension()) {
    std::ostringstream os;
    os << "ell1_lower_constant: vectors have dimension " << vectors.cols() << ", norm has " << norm.dimension();
    throw PreconditionError(os.str());
  }
  sigma.check_within(vectors.rows());
  const PointSet& f = norm.functionals();
  const std::size_t k = sigma.size();
  std::vector<double> b(f.rows() * k, 0.0);
  for (std::size_t j = 0; j < f.rows(); ++j) {
    for (std::size_t s = 0; s < k; ++s) {
      double dot = 0.0;
      for (std::size_t c = 0; c < f.cols(); ++c) dot += f(j, c) * vectors(sigma[s], c);
      b[j * k + s] = dot;
    }
  }
  return b;
}

void check_sigma(const CoordinateSubset& sigma, std::size_t budget) {
  if (sigma.empty()) throw PreconditionError("ell1_lower_constant: sigma must be nonempty");
  check_exponent(sigma.size(), budget, "ell1_lower_constant");
}

struct OrthantValue {
  double value = 0.0;
  std::vector<double> coefficients;
};

// max { w : w <= theta_k z_k, z = sum_j (u_j - v_j) b_j, sum (u + v) <= 1 }.
// The multipliers of the first k rows are the minimising lambda.
OrthantValue dual_orthant(const std::vector<double>& b, std::size_t J, std::size_t k, std::uint64_t mask) {
  LPProblem lp;
  lp.num_variables = 2 * J + 1;
  lp.sense = Sense::Maximize;
  lp.objective.assign(lp.num_variables, 0.0);
  lp.objective[2 * J] = 1.0;
  for (std::size_t s = 0; s < k; ++s) {
    const double theta = ((mask >> s) & 1U) != 0 ? 1.0 : -1.0;
    LinearConstraint con;
    con.coefficients.assign(lp.num_variables, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
      con.coefficients[j] = -theta * b[j * k + s];
      con.coefficients[J + j] = theta * b[j * k + s];
    }
    con.coefficients[2 * J] = 1.0;
    con.relation = Relation::LessEqual;
    con.rhs = 0.0;
    lp.constraints.push_back(std::move(con));
  }
  LinearConstraint mass;
  mass.coefficients.assign(lp.num_variables, 1.0);
  mass.coefficients[2 * J] = 0.0;
  mass.relation = Relation::LessEqual;
  mass.rhs = 1.0;
  lp.constraints.push_back(std::move(mass));

  const LPResult res = lp_solve(lp);
  if (res.status != LPStatus::Optimal) {
    throw AssertionFailure("ell1_lower_constant", "orthant LP ended with status " + to_string(res.status));
  }
  OrthantValue out;
  out.value = std::max(0.0, res.objective);
  out.coefficients.assign(k, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < k; ++s) total += std::max(0.0, res.duals[s]);
  for (std::size_t s = 0; s < k; ++s) {
    const double theta = ((mask >> s) & 1U) != 0 ? 1.0 : -1.0;
    out.coefficients[s] = total > 0.0 ? theta * std::max(0.0, res.duals[s]) / total : (s == 0 ? 1.0 : 0.0);
  }
  return out;
}

// min { s : -s <= <b_j, theta o lambda> <= s, lambda in simplex }.
OrthantValue primal_orthant(const std::vector<double>& b, std::size_t J, std::size_t k, std::uint64_t mask) {
  LPProblem lp;
  lp.num_variables = k + 1;
  lp.sense = Sense::Minimize;
  lp.objective.assign(lp.num_variables, 0.0);
  lp.objective[k] = 1.0;
  for (std::size_t j = 0; j < J; ++j) {
    for (double side : {1.0, -1.0}) {
      LinearConstraint con;
      con.coefficients.assign(lp.num_variables, 0.0);
      for (std::size_t s = 0; s < k; ++s) {
        const double theta = ((mask >> s) & 1U) != 0 ? 1.0 : -1.0;
        con.coefficients[s] = side * theta * b[j * k + s];
      }
      con.coefficients[k] = -1.0;
      con.relation = Relation::LessEqual;
      con.rhs = 0.0;
      lp.constraints.push_back(std::move(con));
    }
  }
  LinearConstraint simplex;
  simplex.coefficients.assign(lp.num_variables, 1.0);
  simplex.coefficients[k] = 0.0;
  simplex.relation = Relation::Equal;
  simplex.rhs = 1.0;
  lp.constraints.push_back(std::move(simplex));

  const LPResult res = lp_solve(lp);
  if (res.status != LPStatus::Optimal) {
    throw AssertionFailure("ell1_lower_constant", "primal orthant LP ended with status " + to_string(res.status));
  }
  OrthantValue out;
  out.value = std::max(0.0, res.objective);
  out.coefficients.assign(k, 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    const double theta = ((mask >> s) & 1U) != 0 ? 1.0 : -1.0;
    out.coefficients[s] = theta * res.x[s];
  }
  return out;
}

template <typename Solve>
Ell1Constant minimise_over_orthants(std::size_t k, unsigned jobs, Solve solve) {
  // theta and -theta give the same value: fix theta_0 = +1 (bit 0 set).
  const std::uint64_t half = std::uint64_t{1} << (k - 1);
  std::vector<OrthantValue> values(static_cast<std::size_t>(half));
  parallel_for(values.size(), jobs, [&](std::size_t idx) {
    values[idx] = solve((static_cast<std::uint64_t>(idx) << 1) | 1U);
  });
  Ell1Constant out;
  out.value = std::numeric_limits<double>::infinity();
  out.lp_solves = values.size();
  for (auto& v : values) {
    if (v.value < out.value) {
      out.value = v.value;
      out.coefficients = std::move(v.coefficients);
    }
  }
  return out;
}

}  // namespace

Ell1Constant ell1_lower_constant(const PolyhedralNorm& norm, const PointSet& vectors, const CoordinateSubset& sigma,
                                 unsigned jobs, std::size_t exponent_budget) {
  check_sigma(sigma, exponent_budget);
  const auto b = functional_images(norm, vectors, sigma);
  const std::size_t J = norm.functionals().rows();
  const std::size_t k = sigma.size();
  return minimise_over_orthants(k, jobs, [&](std::uint64_t mask) { return dual_orthant(b, J, k, mask); });
}

Ell1Constant ell1_lower_constant_primal(const PolyhedralNorm& norm, const PointSet& vectors,
                                        const CoordinateSubset& sigma, std::size_t exponent_budget) {
  check_sigma(sigma, exponent_budget);
  const auto b = functional_images(norm, vectors, sigma);
  const std::size_t J = norm.functionals().rows();
  const std::size_t k = sigma.size();
  return minimise_over_orthants(k, 1, [&](std::uint64_t mask) { return primal_orthant(b, J, k, mask); });
}

}  // namespace combdim
