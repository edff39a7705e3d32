#ifndef COMBDIM_CLASS_MODEL_HPP
#define COMBDIM_CLASS_MODEL_HPP

// Function families on a finite domain, probability measures on that domain,
// coordinate subsets, and the transformations the entropy bound needs:
// atom splitting (uniformize), grid discretisation, and random generators.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace combdim {

// Row-major dense matrix whose rows are points (or functions).
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t rows, std::size_t cols, std::vector<double> data);
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Strictly increasing list of coordinate indices.
class CoordinateSubset {
 public:
  CoordinateSubset() = default;
  // Throws PreconditionError unless `indices` is strictly increasing.
  explicit CoordinateSubset(std::vector<std::size_t> indices);

  static CoordinateSubset from_unsorted(std::vector<std::size_t> indices);
  static CoordinateSubset all(std::size_t n);
  // Bit i of mask selects coordinate i.
  static CoordinateSubset from_mask(std::uint64_t mask);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  std::span<const std::size_t> indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(std::size_t index) const;
  // Throws PreconditionError if some index is >= domain_size.
  void check_within(std::size_t domain_size) const;

  auto operator<=>(const CoordinateSubset&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

// Atomic probability measure on {0, ..., n-1}.
class ProbabilityMeasure {
 public:
  static constexpr double kSumTolerance = 1e-12;

  ProbabilityMeasure() = default;
  // Throws InvariantViolation (with the offending column) on negative or
  // non-finite weights, or if the weights do not sum to 1 within 1e-12.
  explicit ProbabilityMeasure(std::vector<double> weights);

  static ProbabilityMeasure uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  bool is_uniform() const { return uniform_; }

  bool operator==(const ProbabilityMeasure& other) const { return weights_ == other.weights_; }

 private:
  std::vector<double> weights_;
  bool uniform_ = false;
};

enum class ValueKind { RealBounded, IntegerGrid };

/*
  Finite family A of functions on {0, ..., n-1}, stored as an m x n table.

  RealBounded families satisfy |f(i)| <= 1; IntegerGrid(p) families take
  values in {0, 1, ..., p}. Duplicate rows are allowed.
*/
class FunctionFamily {
 public:
  FunctionFamily() = default;

  static FunctionFamily real(PointSet values);
  static FunctionFamily real(const std::vector<std::vector<double>>& rows);
  static FunctionFamily integer_grid(PointSet values, int range_max);
  static FunctionFamily integer_grid(const std::vector<std::vector<double>>& rows, int range_max);

  std::size_t size() const { return values_.rows(); }
  std::size_t domain_size() const { return values_.cols(); }
  ValueKind kind() const { return kind_; }
  bool is_integer() const { return kind_ == ValueKind::IntegerGrid; }
  int range_max() const { return range_max_; }

  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }
  std::span<const double> row(std::size_t r) const { return values_.row(r); }
  int level(std::size_t r, std::size_t c) const { return static_cast<int>(values_(r, c)); }
  const PointSet& values() const { return values_; }

  // Family of the selected rows, in the given order.
  FunctionFamily select_rows(std::span<const std::size_t> rows) const;
  // Family restricted to the coordinates of `subset` (in increasing order).
  FunctionFamily restrict_to(const CoordinateSubset& subset) const;
  // Family with exact duplicate rows removed (first occurrence kept).
  FunctionFamily distinct_rows() const;

  bool operator==(const FunctionFamily&) const = default;

 private:
  FunctionFamily(PointSet values, ValueKind kind, int range_max);

  PointSet values_;
  ValueKind kind_ = ValueKind::RealBounded;
  int range_max_ = 0;
};

struct LoadedFamily {
  FunctionFamily family;
  ProbabilityMeasure measure;
};

LoadedFamily load_family(const std::filesystem::path& path);
LoadedFamily parse_family(const std::string& json_text);
void save_family(const std::filesystem::path& path, const FunctionFamily& family,
                 const ProbabilityMeasure& measure);
std::string serialize_family(const FunctionFamily& family, const ProbabilityMeasure& measure);

// Shortest decimal string that parses back to exactly `value`.
std::string format_decimal(double value);

struct UniformizedFamily {
  FunctionFamily family;
  ProbabilityMeasure measure;
  std::uint64_t denominator = 1;
  // replication[i] = number of copies of input coordinate i.
  std::vector<std::uint64_t> replication;
  // Largest |w_i - k_i / M| over the input weights.
  double residual = 0.0;
};

// Splits atoms so the measure becomes exactly uniform on M <= denominator_bound
// coordinates. Coordinate i is replicated k_i times where w_i ~ k_i / M; weights
// are approximated by continued fractions and must be matched within
// `tolerance`. Zero-weight coordinates get zero copies.
UniformizedFamily uniformize(const FunctionFamily& family, const ProbabilityMeasure& measure,
                             std::uint64_t denominator_bound, double tolerance = 1e-9);

// Best rational approximation num/den of x with den <= max_denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
Rational best_rational(double x, std::int64_t max_denominator);

// Integer-grid image of a real family at scale t: entry floor(7 (f(i) + 1) / t),
// range_max = floor(14 / t). If the input is s-separated in L2(mu) the image is
// (7 s / t - 1)-separated.
FunctionFamily discretize(const FunctionFamily& family, const ProbabilityMeasure& measure, double t);

enum class GeneratorKind { UniformReal, SignVectors, IntegerGrid, ConvexHullSections };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UniformReal;
  int range_max = 4;  // IntegerGrid only
};

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

// Pure function of (m, n, spec, seed).
FunctionFamily gen_random_family(std::size_t m, std::size_t n, const GeneratorSpec& spec,
                                 std::uint64_t seed);

}  // namespace combdim

#endif  // COMBDIM_CLASS_MODEL_HPP
