#ifndef COMBDIM_GAUSSIAN_ELTON_HPP
#define COMBDIM_GAUSSIAN_ELTON_HPP

// Suprema of Gaussian and Rademacher processes indexed by finite sets,
// entropy integrals, and the Elton-type subset search for vector systems in
// polyhedral normed spaces.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/geometry.hpp"

namespace combdim {

enum class ProcessKind { Gaussian, Rademacher };

std::string to_string(ProcessKind kind);
ProcessKind parse_process_kind(const std::string& name);

struct SupEstimate {
  double mean = 0.0;
  double standard_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::size_t samples = 0;
  ProcessKind process_kind = ProcessKind::Gaussian;
};

// E sup_a sum_i g_i a(i) over the rows a of `points`. Samples are drawn in
// fixed blocks of 1024 with one derived stream per block, so the estimate
// does not depend on `jobs`. Throws PreconditionError for samples < 2.
SupEstimate gaussian_sup_mc(const PointSet& points, std::size_t samples, std::uint64_t seed,
                            ProcessKind kind = ProcessKind::Gaussian, unsigned jobs = 1);
SupEstimate gaussian_sup_mc(const FunctionFamily& family, std::size_t samples, std::uint64_t seed,
                            ProcessKind kind = ProcessKind::Gaussian, unsigned jobs = 1);

// Step curves: points (t_k, v_k) with t strictly increasing; v_k holds on
// (t_{k-1}, t_k] (on (0, t_0] for k = 0) and the curve is 0 beyond the last
// point. Values must be non-increasing in t.
using StepCurve = std::vector<std::pair<double, double>>;

// Integral of sqrt(v(t)) over [lower, upper], exact on the step curve.
// Logarithms are natural throughout.
double entropy_integral(const StepCurve& log_counts, double lower, double upper);

// Integral of sqrt(vc(t) ln(2/t)) over [lower, upper] (upper <= 2), exact:
// on each piece the integral of sqrt(ln(2/t)) is
// 2 [G(ln(2/b)) - G(ln(2/a))] with G(x) = Gamma(3/2, x).
double vc_integral(const StepCurve& vc_curve, double lower, double upper = 1.0);

// Upper incomplete gamma function Gamma(3/2, x), x >= 0.
double upper_gamma_three_halves(double x);

struct SudakovReport {
  double ratio = 0.0;      // max_t t sqrt(ln N(A, t)) / E
  double argmax_t = 0.0;
  std::vector<std::pair<double, std::size_t>> packing;  // (t, N) on the grid
};

// Empirical Sudakov constant. Distances are Euclidean on R^n (the canonical
// metric of the Gaussian process), so N(A, t) is the L2(uniform) packing
// number at scale t / sqrt(n). Throws PreconditionError unless
// expected_sup > 0 and the grid is nonempty and positive.
SudakovReport sudakov_ratio(const FunctionFamily& family, const std::vector<double>& t_grid, double expected_sup);

// c0 / (t ln^1.1(2/t)) with c0 = (ln 2)^0.1 / 10, which makes the integral
// over (0, 1) equal to 1.
inline constexpr double kWeightExponent = 1.1;
double weight_h_constant();
double weight_h(double t);

// 2^-1, 2^-2, ..., 2^-levels.
std::vector<double> geometric_grid(std::size_t levels = 8);

struct EltonOptions {
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  ProcessKind process = ProcessKind::Rademacher;
  std::vector<double> t_grid = geometric_grid();
  unsigned jobs = 1;
  std::size_t exponent_budget = kDefaultExponentBudget;
  std::size_t max_cube_tests = 1000000;
  double tradeoff_exponent = 1.6;
};

struct EltonSweepPoint {
  double t = 0.0;
  std::size_t vc = 0;
  CoordinateSubset support;
  double s = 0.0;       // sqrt(vc / n)
  double weight = 0.0;  // sqrt(vc / n * ln(2/t)) / (delta h(t))
};

struct EltonResult {
  CoordinateSubset sigma;
  double t = 0.0;          // LP-certified l1 constant on sigma
  double t_grid = 0.0;     // side of the cube found in P_sigma(B)
  double s = 0.0;          // sqrt(|sigma| / n)
  double delta = 0.0;      // E / n
  double tradeoff = 0.0;   // s t ln^exponent(2/t)
  double tradeoff_exponent = 1.6;
  SupEstimate expected_sup;
  std::vector<double> coefficients;  // minimising a on sigma
  double reproved_t = 0.0;           // independent LP run
  std::vector<EltonSweepPoint> sweep;
  std::size_t weight_favoured = 0;   // sweep index maximising `weight`
};

// Throws PreconditionError if some ||x_i|| > 1 + 1e-9, and AssertionFailure
// if the certified constant falls below t_grid / 2 or the re-proof disagrees
// beyond 1e-6.
EltonResult elton_subset(const PolyhedralNorm& norm, const PointSet& vectors, const EltonOptions& options = {});

struct RudelsonInstance {
  PolyhedralNorm norm;
  PointSet vectors;  // the unit vector basis (constant vectors below 1/sqrt(n))
  double delta = 0.0;
  std::size_t cap_size = 0;  // |S| of the cap functionals 1_S o theta
  // Functionals lie in the polar of D, so ||.||_F <= ||.||_D and s t <= delta
  // carries over without loss: the reported slack is 0.
  double net_slack = 0.0;
};

// Polyhedral inner approximation of the norm with unit ball
// conv(B_1^n u (delta sqrt n)^-1 D_n): functionals delta theta (theta_0 = +1),
// e_i, and 1_S o theta over cyclic windows S of size floor(delta^2 n).
// For delta < 1/sqrt(n) the instance is instead n copies of delta sqrt(n) in
// X = R, where every sigma with two elements cancels and s t = delta.
// Throws PreconditionError for n > 12 or delta outside (0, 1].
RudelsonInstance rudelson_example(std::size_t n, double delta, bool cap_functionals = true);

// Random norm on R^n from `functionals` Gaussian functionals plus the
// coordinate functionals, and n random vectors scaled to norm 1.
struct NormInstance {
  PolyhedralNorm norm;
  PointSet vectors;
};
NormInstance random_norm_instance(std::size_t n, std::size_t functionals, std::uint64_t seed);

}  // namespace combdim

#endif  // COMBDIM_GAUSSIAN_ELTON_HPP
