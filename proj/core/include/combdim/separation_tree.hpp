#ifndef COMBDIM_SEPARATION_TREE_HPP
#define COMBDIM_SEPARATION_TREE_HPP

/*
  Separating trees of t-separated families.

  A family that is t-separated in L2(mu) has a coordinate on which the values
  of its members (each member weighted 1/|A|) have standard deviation at
  least t/2. A small-deviation split of that one-dimensional distribution
  gives two large subfamilies whose values on the coordinate differ by more
  than t/6. Recursing on both subfamilies yields a (t/6)-separating tree with
  at least |A|^(1/2) leaves.
*/

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combdim/class_model.hpp"

namespace combdim {

// Finite distribution given by (value, probability) atoms.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  struct Atom {
    double value;
    double probability;
  };

  // Throws PreconditionError on negative probabilities or a total != 1.
  explicit Distribution(std::vector<Atom> atoms);
  // Each value gets probability 1 / values.size().
  static Distribution empirical(const std::vector<double>& values);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mean() const;
  // P{X > x} and P{X < x}.
  double prob_above(double x) const;
  double prob_below(double x) const;
  // E|X - a|^2
  double mean_square_deviation(double a) const;

 private:
  std::vector<Atom> atoms_;
};

struct VarianceReport {
  double variance = 0.0;         // E|X - EX|^2
  double pair_expectation = 0.0; // E|X - X'|^2 by double summation
};

VarianceReport variance(const Distribution& dist);

enum class SplitSide { UpperHeavy, LowerHeavy };

std::string to_string(SplitSide side);

// Either p_upper >= 1 - beta and p_lower >= beta / 2 (UpperHeavy), or the
// mirror image (LowerHeavy), where p_upper = P{X > threshold + gap_halfwidth}
// and p_lower = P{X < threshold - gap_halfwidth}.
struct SplitCertificate {
  double threshold = 0.0;
  double beta = 0.5;
  double gap_halfwidth = 0.0;
  SplitSide side = SplitSide::UpperHeavy;
  double p_upper = 0.0;
  double p_lower = 0.0;
};

// Re-evaluates the certificate's probabilities from `dist` and checks its
// side inequalities and 0 < beta <= 1/2.
bool certificate_holds(const Distribution& dist, const SplitCertificate& cert);

// Small-deviation split with gap_halfwidth = sigma(X) / 6. Thresholds are
// searched over every interval on which the two tail sets are constant; for
// each, beta maximises min(p_heavy - (1 - beta), p_light - beta / 2).
// Throws PreconditionError on zero variance.
SplitCertificate small_dev_split(const Distribution& dist);

struct SeparatingCoordinate {
  std::size_t coordinate = 0;
  double deviation = 0.0;  // sigma(x(i)) under the uniform weight on the family
  SplitCertificate certificate;  // gap_halfwidth = t / 12
};

// Finds a coordinate whose value distribution over the family admits a split
// with gap t/12. Coordinates are scanned by decreasing variance (ties by
// index). Throws PreconditionError naming the offending pair if the family is
// not t-separated, or if it has fewer than two members.
SeparatingCoordinate find_separating_coordinate(const FunctionFamily& family, const ProbabilityMeasure& measure,
                                                double t);

struct TreeNode {
  std::vector<std::size_t> rows;  // indices into the original family
  struct Split {
    std::size_t coordinate = 0;
    double threshold = 0.0;
    double gap = 0.0;
    std::size_t plus_son = 0;
    std::size_t minus_son = 0;
  };
  std::optional<Split> split;  // empty for leaves
};

struct SeparatingTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t leaf_count() const;
  std::size_t depth() const;
};

// (t/6)-separating tree. Sons are {x(i) > a + t/12} and {x(i) < a - t/12};
// members inside the band are dropped. A one-member family is a single leaf.
SeparatingTree build_separating_tree(const FunctionFamily& family, const ProbabilityMeasure& measure, double t);

struct TreeValidation {
  bool ok = true;
  std::string message;  // first violation, empty when ok

  explicit operator bool() const { return ok; }
};

// Exhaustive re-check: every node nonempty, sons disjoint subsets of their
// parent, and f(i) > g(i) + gap for every f in the plus son and g in the
// minus son of every internal node.
TreeValidation validate_tree(const SeparatingTree& tree, const FunctionFamily& family, double gap);

}  // namespace combdim

#endif  // COMBDIM_SEPARATION_TREE_HPP
