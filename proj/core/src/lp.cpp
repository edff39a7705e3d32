#include "combdim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "combdim/errors.hpp"

namespace combdim {

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

// Tableau in canonical form: rows_ x (cols_ + 1), last column is the rhs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced, double& value) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = reduced[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) reduced[c] -= f * at(pr, c);
      reduced[pc] = 0.0;
      value += f * rhs(pr);
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
             a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { Optimal, Unbounded, IterationLimit };

// Maximises cost^T x over the current basis. Columns with allowed[c] == false
// never enter. reduced/value are maintained alongside the tableau.
Outcome run_simplex(Tableau& tab, const std::vector<double>& cost, const std::vector<bool>& allowed,
                    const LPOptions& options, std::size_t& iterations, double& value,
                    std::vector<double>& reduced) {
  const double tol = options.tolerance;
  reduced = cost;
  value = 0.0;
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    const double cb = cost[tab.basis()[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < tab.cols(); ++c) reduced[c] -= cb * tab.at(r, c);
    value += cb * tab.rhs(r);
  }
  while (true) {
    std::size_t enter = tab.cols();
    for (std::size_t c = 0; c < tab.cols(); ++c) {
      if (allowed[c] && reduced[c] > tol) {
        enter = c;
        break;
      }
    }
    if (enter == tab.cols()) return Outcome::Optimal;
    if (iterations >= options.max_iterations) return Outcome::IterationLimit;
    std::size_t leave = tab.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      const double coef = tab.at(r, enter);
      if (coef <= tol) continue;
      const double ratio = std::max(0.0, tab.rhs(r)) / coef;
      if (leave == tab.rows() || ratio < best - tol) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + tol && tab.basis()[r] < tab.basis()[leave]) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
    if (leave == tab.rows()) return Outcome::Unbounded;
    tab.pivot(leave, enter, reduced, value);
    ++iterations;
  }
}

}  // namespace

LPResult lp_solve(const LPProblem& problem, const LPOptions& options) {
  const std::size_t nv = problem.num_variables;
  if (!problem.objective.empty() && problem.objective.size() != nv) {
    throw PreconditionError("lp_solve: objective has the wrong number of coefficients");
  }
  if (!problem.free_variables.empty() && problem.free_variables.size() != nv) {
    throw PreconditionError("lp_solve: free_variables has the wrong size");
  }
  for (double c : problem.objective) {
    if (!std::isfinite(c)) throw PreconditionError("lp_solve: non-finite objective coefficient");
  }
  for (std::size_t r = 0; r < problem.constraints.size(); ++r) {
    const auto& con = problem.constraints[r];
    if (con.coefficients.size() != nv) {
      std::ostringstream os;
      os << "lp_solve: constraint " << r << " has " << con.coefficients.size() << " coefficients, expected " << nv;
      throw PreconditionError(os.str());
    }
    bool finite = std::isfinite(con.rhs);
    for (double v : con.coefficients) finite = finite && std::isfinite(v);
    if (!finite) {
      std::ostringstream os;
      os << "lp_solve: constraint " << r << " has non-finite data";
      throw PreconditionError(os.str());
    }
  }

  // Column layout: structural (free variables split in +/- parts), then one
  // slack/surplus per inequality, then artificials.
  std::vector<std::size_t> plus_col(nv), minus_col(nv, static_cast<std::size_t>(-1));
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    plus_col[j] = ncols++;
    if (!problem.free_variables.empty() && problem.free_variables[j]) minus_col[j] = ncols++;
  }
  const std::size_t structural = ncols;
  const std::size_t m = problem.constraints.size();

  std::vector<Relation> rel(m);
  std::vector<double> sign(m, 1.0);
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = problem.constraints[r];
    rel[r] = con.relation;
    if (con.rhs < 0.0) {
      sign[r] = -1.0;
      if (rel[r] == Relation::LessEqual) rel[r] = Relation::GreaterEqual;
      else if (rel[r] == Relation::GreaterEqual) rel[r] = Relation::LessEqual;
    }
    if (rel[r] != Relation::Equal) ++slack_count;
    if (rel[r] != Relation::LessEqual) ++artificial_count;
  }
  const std::size_t first_artificial = structural + slack_count;
  ncols = first_artificial + artificial_count;

  Tableau tab(m, ncols);
  std::size_t next_slack = structural;
  std::size_t next_art = first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = problem.constraints[r];
    for (std::size_t j = 0; j < nv; ++j) {
      const double v = sign[r] * con.coefficients[j];
      tab.at(r, plus_col[j]) = v;
      if (minus_col[j] != static_cast<std::size_t>(-1)) tab.at(r, minus_col[j]) = -v;
    }
    tab.rhs(r) = sign[r] * con.rhs;
    if (rel[r] == Relation::LessEqual) {
      tab.at(r, next_slack) = 1.0;
      tab.basis()[r] = next_slack++;
    } else {
      if (rel[r] == Relation::GreaterEqual) tab.at(r, next_slack++) = -1.0;
      tab.at(r, next_art) = 1.0;
      tab.basis()[r] = next_art++;
    }
  }

  LPResult result;
  std::vector<bool> allowed(ncols, true);
  std::vector<double> reduced;
  double value = 0.0;

  if (artificial_count > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t c = first_artificial; c < ncols; ++c) phase1[c] = -1.0;
    const Outcome out = run_simplex(tab, phase1, allowed, options, result.iterations, value, reduced);
    if (out == Outcome::IterationLimit) {
      result.status = LPStatus::IterationLimit;
      return result;
    }
    result.infeasibility = std::max(0.0, -value);
    double scale = 1.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) scale = std::max(scale, std::abs(tab.rhs(r)));
    if (result.infeasibility > options.tolerance * scale) {
      result.status = LPStatus::Infeasible;
      return result;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    std::vector<double> dummy(ncols, 0.0);
    double dummy_value = 0.0;
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis()[r] < first_artificial) {
        ++r;
        continue;
      }
      std::size_t pc = first_artificial;
      for (std::size_t c = 0; c < first_artificial; ++c) {
        if (std::abs(tab.at(r, c)) > options.tolerance) {
          pc = c;
          break;
        }
      }
      if (pc == first_artificial) {
        tab.drop_row(r);  // redundant constraint
      } else {
        tab.pivot(r, pc, dummy, dummy_value);
        ++r;
      }
    }
    for (std::size_t c = first_artificial; c < ncols; ++c) allowed[c] = false;
  }

  std::vector<double> cost(ncols, 0.0);
  const double dir = problem.sense == Sense::Maximize ? 1.0 : -1.0;
  if (!problem.objective.empty()) {
    for (std::size_t j = 0; j < nv; ++j) {
      cost[plus_col[j]] = dir * problem.objective[j];
      if (minus_col[j] != static_cast<std::size_t>(-1)) cost[minus_col[j]] = -dir * problem.objective[j];
    }
  }
  const Outcome out = run_simplex(tab, cost, allowed, options, result.iterations, value, reduced);
  if (out == Outcome::IterationLimit) {
    result.status = LPStatus::IterationLimit;
    return result;
  }
  if (out == Outcome::Unbounded) {
    result.status = LPStatus::Unbounded;
    return result;
  }

  std::vector<double> column_value(ncols, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) column_value[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  result.x.assign(nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    result.x[j] = column_value[plus_col[j]];
    if (minus_col[j] != static_cast<std::size_t>(-1)) result.x[j] -= column_value[minus_col[j]];
  }
  result.objective = 0.0;
  if (!problem.objective.empty()) {
    for (std::size_t j = 0; j < nv; ++j) result.objective += problem.objective[j] * result.x[j];
  }
  // Row r's multiplier pi_r shows up in the reduced cost of its slack,
  // surplus or artificial column.
  result.duals.assign(m, 0.0);
  next_slack = structural;
  next_art = first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    double pi = 0.0;
    if (rel[r] == Relation::LessEqual) {
      pi = -reduced[next_slack++];
    } else if (rel[r] == Relation::GreaterEqual) {
      pi = reduced[next_slack++];
      ++next_art;
    } else {
      pi = -reduced[next_art++];
    }
    result.duals[r] = dir * sign[r] * pi;
  }
  result.status = LPStatus::Optimal;
  return result;
}

}  // namespace combdim
