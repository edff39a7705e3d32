#ifndef COMBDIM_SHATTERING_HPP
#define COMBDIM_SHATTERING_HPP

// Combinatorial dimensions of function families.
//
// Two notions live here and are never mixed:
//  * integer centres (sigma, h), shattered when every sign pattern is
//    realised with STRICT inequalities f(i) > h(i) / f(i) < h(i);
//  * real t-shattering, where sigma is t-shattered with level h if every
//    subset sigma' is realised by some f with f <= h on sigma' and
//    f >= h + t off sigma' (NON-strict).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "combdim/class_model.hpp"

namespace combdim {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

struct Center {
  CoordinateSubset support;
  std::vector<int> levels;  // levels[k] is h(support[k])

  std::size_t dimension() const { return support.size(); }
  bool trivial() const { return support.empty(); }

  auto operator<=>(const Center&) const = default;
};

struct ShatterWitness {
  Center center;
  // assignments[pattern] = row realising the pattern. Bit k of `pattern` set
  // means theta = +1 (f > h) on support[k]; clear means theta = -1 (f < h).
  std::vector<std::size_t> assignments;
};

// Witness iff `center` is shattered by the integer family. The trivial centre
// is shattered by every (nonempty) family.
std::optional<ShatterWitness> shatters(const FunctionFamily& family, const Center& center);

// Re-checks a witness against the strict-inequality definition.
bool verify_witness(const FunctionFamily& family, const ShatterWitness& witness);

// Every shattered centre of dimension <= max_dim, ordered by (dimension,
// support, levels). Levels at coordinate i range over the integers strictly
// between min_f f(i) and max_f f(i). Throws BudgetExceeded once more than
// `budget` candidate centres have been examined.
std::vector<Center> enumerate_shattered_centers(const FunctionFamily& family, std::size_t max_dim,
                                                std::uint64_t budget = kDefaultEnumerationBudget);

// Number of shattered centres (all dimensions) without materialising them.
std::uint64_t count_shattered_centers(const FunctionFamily& family,
                                      std::uint64_t budget = kDefaultEnumerationBudget);

// Maximal dimension of a shattered centre, i.e. vc(A, 2) for integer A.
std::size_t vc_integer(const FunctionFamily& family, std::uint64_t budget = kDefaultEnumerationBudget);

struct RealShatterResult {
  std::size_t dimension = 0;
  CoordinateSubset support;    // lexicographically smallest maximiser
  std::vector<double> levels;  // level function on `support`
};

// vc(A, t): largest |sigma| that is t-shattered. Levels are searched over the
// attained values {f(i)}; every feasible level can be raised to one of them.
RealShatterResult vc_real_witness(const FunctionFamily& family, double t,
                                  std::uint64_t budget = kDefaultEnumerationBudget);
std::size_t vc_real(const FunctionFamily& family, double t, std::uint64_t budget = kDefaultEnumerationBudget);

// True iff `support` is t-shattered with the given levels.
bool is_t_shattered(const FunctionFamily& family, const CoordinateSubset& support, std::span<const double> levels,
                    double t);

// vc_real at each grid point, as (t, vc) pairs in grid order. Throws
// AssertionFailure if vc increases with t anywhere on the grid.
std::vector<std::pair<double, std::size_t>> vc_curve(const FunctionFamily& family, std::span<const double> t_grid,
                                                     std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace combdim

#endif  // COMBDIM_SHATTERING_HPP
