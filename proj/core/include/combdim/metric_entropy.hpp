#ifndef COMBDIM_METRIC_ENTROPY_HPP
#define COMBDIM_METRIC_ENTROPY_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "combdim/class_model.hpp"

namespace combdim {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

// (sum_i w_i |f(i) - g(i)|^p)^(1/p); p = kInfinityNorm gives the max over
// coordinates of positive weight.
double lp_distance(std::span<const double> f, std::span<const double> g, const ProbabilityMeasure& measure,
                   double p = 2.0);

// Symmetric m x m table of pairwise Lp(mu) distances, row-major.
std::vector<double> pairwise_distances(const FunctionFamily& family, const ProbabilityMeasure& measure,
                                       double p = 2.0);

// True iff every pair of distinct rows is at distance strictly greater than t.
bool is_separated(const FunctionFamily& family, const ProbabilityMeasure& measure, double t, double p = 2.0);

// First pair (i < j) at distance <= t, if any.
std::optional<std::pair<std::size_t, std::size_t>> first_unseparated_pair(const FunctionFamily& family,
                                                                          const ProbabilityMeasure& measure,
                                                                          double t, double p = 2.0);

enum class EntropyMode { Exact, Greedy };
enum class CountFlag { Exact, LowerBound, UpperBound };

std::string to_string(CountFlag flag);
EntropyMode parse_entropy_mode(const std::string& name);

struct EntropyCount {
  std::size_t count = 1;
  CountFlag flag = CountFlag::Exact;
  // Row indices of the separated set (packing) or of the centres (covering).
  std::vector<std::size_t> witness;
};

struct EntropyOptions {
  EntropyMode mode = EntropyMode::Exact;
  double p = 2.0;
  std::size_t exact_packing_limit = 30;
  std::size_t exact_covering_limit = 25;
  // Run exact mode above the size limits anyway (still capped at 64 rows).
  bool force = false;
};

// N_sep(A, t, Lp(mu)): largest subset with all pairwise distances > t.
// Exact mode is a maximum-clique branch and bound; greedy mode returns a
// maximal-by-inclusion set (flag LowerBound).
EntropyCount packing_number(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                            const EntropyOptions& options = {});

// N(A, t, Lp(mu)) with centres drawn from A; ball membership is distance <= t.
// Exact mode is a set-cover branch and bound; greedy mode flags UpperBound.
EntropyCount covering_number(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                             const EntropyOptions& options = {});

struct EntropyReport {
  double scale = 0.0;
  EntropyCount packing;
  EntropyCount covering;
};

EntropyReport entropy_report(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                             const EntropyOptions& options = {});

// Largest pairwise distance.
double diameter(const FunctionFamily& family, const ProbabilityMeasure& measure, double p = 2.0);

}  // namespace combdim

#endif  // COMBDIM_METRIC_ENTROPY_HPP
