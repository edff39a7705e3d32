#ifndef COMBDIM_LP_HPP
#define COMBDIM_LP_HPP

// Dense two-phase simplex with Bland's anti-cycling rule. Meant for the small
// certificate LPs of the geometry layer (tens of rows, a few thousand columns);
// deterministic: identical problems give identical basic solutions.

#include <cstddef>
#include <string>
#include <vector>

namespace combdim {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

struct LinearConstraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LPProblem {
  std::size_t num_variables = 0;
  Sense sense = Sense::Maximize;
  std::vector<double> objective;  // empty means pure feasibility
  std::vector<LinearConstraint> constraints;
  // Variables are >= 0 unless flagged free here (empty = none free).
  std::vector<bool> free_variables;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LPStatus status);

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  // Phase-one optimum: total artificial infeasibility (0 when feasible).
  double infeasibility = 0.0;
  // Shadow price of each constraint for the stated objective (Optimal only).
  std::vector<double> duals;
};

struct LPOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 200000;
};

// Throws PreconditionError on dimension mismatches or non-finite data.
LPResult lp_solve(const LPProblem& problem, const LPOptions& options = {});

}  // namespace combdim

#endif  // COMBDIM_LP_HPP
