#include "combdim/class_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "combdim/errors.hpp"
#include "combdim/random.hpp"
#include "json.hpp"
#include "json_io.hpp"

namespace combdim {

namespace {

std::string position(std::size_t row, std::size_t column) {
  std::ostringstream os;
  os << "row " << row << ", column " << column;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw PreconditionError("PointSet: data size does not match rows x cols");
  }
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw PreconditionError("PointSet: row " + std::to_string(r) + " has length " +
                              std::to_string(rows[r].size()) + ", expected " + std::to_string(cols));
    }
    data.insert(data.end(), rows[r].begin(), rows[r].end());
  }
  return PointSet(rows.size(), cols, std::move(data));
}

// ---------------------------------------------------------------------------
// CoordinateSubset

CoordinateSubset::CoordinateSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) {
      throw PreconditionError("CoordinateSubset: indices must be strictly increasing");
    }
  }
}

CoordinateSubset CoordinateSubset::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return CoordinateSubset(std::move(indices));
}

CoordinateSubset CoordinateSubset::all(std::size_t n) {
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  return CoordinateSubset(std::move(indices));
}

CoordinateSubset CoordinateSubset::from_mask(std::uint64_t mask) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if ((mask & 1U) != 0) indices.push_back(i);
  }
  return CoordinateSubset(std::move(indices));
}

bool CoordinateSubset::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

void CoordinateSubset::check_within(std::size_t domain_size) const {
  if (!indices_.empty() && indices_.back() >= domain_size) {
    throw PreconditionError("coordinate " + std::to_string(indices_.back()) +
                            " out of range for domain of size " + std::to_string(domain_size));
  }
}

// ---------------------------------------------------------------------------
// ProbabilityMeasure

ProbabilityMeasure::ProbabilityMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvariantViolation("measure: no atoms");
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw InvariantViolation("measure: weight at column " + std::to_string(i) +
                                   " is negative or not finite",
                               InvariantViolation::npos, i);
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "measure: weights sum to " << total << ", expected 1";
    throw InvariantViolation(os.str());
  }
  uniform_ = std::all_of(weights_.begin(), weights_.end(),
                         [&](double w) { return w == weights_.front(); });
}

ProbabilityMeasure ProbabilityMeasure::uniform(std::size_t n) {
  if (n == 0) throw PreconditionError("uniform measure on an empty domain");
  ProbabilityMeasure measure;
  measure.weights_.assign(n, 1.0 / static_cast<double>(n));
  measure.uniform_ = true;
  return measure;
}

// ---------------------------------------------------------------------------
// FunctionFamily

FunctionFamily::FunctionFamily(PointSet values, ValueKind kind, int range_max)
    : values_(std::move(values)), kind_(kind), range_max_(range_max) {
  if (values_.rows() == 0) throw InvariantViolation("family: needs at least one function");
  if (values_.cols() == 0) throw InvariantViolation("family: empty domain");
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      const double v = values_(r, c);
      if (kind_ == ValueKind::RealBounded) {
        if (!(std::abs(v) <= 1.0)) {
          std::ostringstream os;
          os.precision(17);
          os << "family: value " << v << " at " << position(r, c) << " outside [-1, 1]";
          throw InvariantViolation(os.str(), r, c);
        }
      } else if (!(v >= 0.0 && v <= range_max_ && std::floor(v) == v)) {
        std::ostringstream os;
        os << "family: value " << v << " at " << position(r, c) << " is not an integer in {0, ..., "
           << range_max_ << "}";
        throw InvariantViolation(os.str(), r, c);
      }
    }
  }
}

FunctionFamily FunctionFamily::real(PointSet values) {
  return FunctionFamily(std::move(values), ValueKind::RealBounded, 0);
}

FunctionFamily FunctionFamily::real(const std::vector<std::vector<double>>& rows) {
  return real(PointSet::from_rows(rows));
}

FunctionFamily FunctionFamily::integer_grid(PointSet values, int range_max) {
  if (range_max < 0) throw PreconditionError("integer grid: range_max must be non-negative");
  return FunctionFamily(std::move(values), ValueKind::IntegerGrid, range_max);
}

FunctionFamily FunctionFamily::integer_grid(const std::vector<std::vector<double>>& rows,
                                            int range_max) {
  return integer_grid(PointSet::from_rows(rows), range_max);
}

FunctionFamily FunctionFamily::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> data;
  data.reserve(rows.size() * domain_size());
  for (std::size_t r : rows) {
    if (r >= size()) throw PreconditionError("select_rows: row index out of range");
    const auto src = row(r);
    data.insert(data.end(), src.begin(), src.end());
  }
  return FunctionFamily(PointSet(rows.size(), domain_size(), std::move(data)), kind_, range_max_);
}

FunctionFamily FunctionFamily::restrict_to(const CoordinateSubset& subset) const {
  subset.check_within(domain_size());
  std::vector<double> data;
  data.reserve(size() * subset.size());
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t c : subset) data.push_back(values_(r, c));
  }
  return FunctionFamily(PointSet(size(), subset.size(), std::move(data)), kind_, range_max_);
}

FunctionFamily FunctionFamily::distinct_rows() const {
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < size(); ++r) {
    const auto src = row(r);
    if (seen.emplace(src.begin(), src.end()).second) keep.push_back(r);
  }
  return select_rows(keep);
}

// ---------------------------------------------------------------------------
// File I/O

std::string format_decimal(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

using detail::parse_number;

LoadedFamily parse_family(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("family file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("family file: top level must be an object");
  for (const char* key : {"domain_size", "values"}) {
    if (!doc.contains(key)) throw ParseError(std::string("family file: missing key '") + key + "'");
  }
  if (!doc["domain_size"].is_number_integer() || doc["domain_size"].get<long long>() < 1) {
    throw ParseError("family file: domain_size must be a positive integer");
  }
  const auto n = doc["domain_size"].get<std::size_t>();

  bool integer = false;
  int range_max = 0;
  if (doc.contains("value_kind")) {
    const auto& kind = doc["value_kind"];
    if (kind.is_string() && kind.get<std::string>() == "real") {
      integer = false;
    } else if (kind.is_object() && kind.contains("integer") && kind["integer"].is_number_integer()) {
      integer = true;
      range_max = kind["integer"].get<int>();
    } else {
      throw ParseError("family file: value_kind must be \"real\" or {\"integer\": p}");
    }
  }

  const auto& rows = doc["values"];
  if (!rows.is_array() || rows.empty()) throw ParseError("family file: values must be a non-empty array");
  std::vector<double> data;
  data.reserve(rows.size() * n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) {
      throw ParseError("family file: row " + std::to_string(r) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (std::size_t c = 0; c < n; ++c) data.push_back(parse_number(rows[r][c], position(r, c)));
  }
  PointSet values(rows.size(), n, std::move(data));
  FunctionFamily family =
      integer ? FunctionFamily::integer_grid(std::move(values), range_max) : FunctionFamily::real(std::move(values));

  ProbabilityMeasure measure = ProbabilityMeasure::uniform(n);
  if (doc.contains("measure")) {
    const auto& weights = doc["measure"];
    if (!weights.is_array() || weights.size() != n) {
      throw ParseError("family file: measure must have domain_size entries");
    }
    std::vector<double> w;
    for (std::size_t c = 0; c < n; ++c) w.push_back(parse_number(weights[c], "measure column " + std::to_string(c)));
    measure = ProbabilityMeasure(std::move(w));
  }
  return {std::move(family), std::move(measure)};
}

LoadedFamily load_family(const std::filesystem::path& path) {
  return parse_family(detail::read_text_file(path, "family file"));
}

std::string serialize_family(const FunctionFamily& family, const ProbabilityMeasure& measure) {
  nlohmann::ordered_json doc;
  doc["domain_size"] = family.domain_size();
  if (family.is_integer()) {
    doc["value_kind"] = {{"integer", family.range_max()}};
  } else {
    doc["value_kind"] = "real";
  }
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < family.size(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (double v : family.row(r)) row.push_back(format_decimal(v));
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  auto weights = nlohmann::ordered_json::array();
  for (double w : measure.weights()) weights.push_back(format_decimal(w));
  doc["measure"] = std::move(weights);
  return doc.dump(2) + "\n";
}

void save_family(const std::filesystem::path& path, const FunctionFamily& family,
                 const ProbabilityMeasure& measure) {
  if (measure.size() != family.domain_size()) {
    throw PreconditionError("save_family: measure length differs from domain size");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_family(family, measure);
}

// ---------------------------------------------------------------------------
// Atom splitting

Rational best_rational(double x, std::int64_t max_denominator) {
  if (max_denominator < 1) throw PreconditionError("best_rational: max_denominator must be >= 1");
  const bool negative = x < 0.0;
  double r = std::abs(x);
  std::int64_t p0 = 0;
  std::int64_t q0 = 1;
  std::int64_t p1 = 1;
  std::int64_t q1 = 0;
  for (int step = 0; step < 64; ++step) {
    const double a_real = std::floor(r);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - a_real;
    if (frac < 1e-300) break;
    r = 1.0 / frac;
  }
  Rational best{p1, q1};
  if (q1 == 0) best = {static_cast<std::int64_t>(std::floor(std::abs(x))), 1};
  // Semiconvergent with the largest admissible partial quotient.
  if (q1 > 0) {
    const std::int64_t k = (max_denominator - q0) / q1;
    const Rational semi{p0 + k * p1, q0 + k * q1};
    const double target = std::abs(x);
    const double err_semi = std::abs(target - static_cast<double>(semi.num) / static_cast<double>(semi.den));
    const double err_conv = std::abs(target - static_cast<double>(best.num) / static_cast<double>(best.den));
    if (semi.den > 0 && err_semi < err_conv) best = semi;
  }
  if (negative) best.num = -best.num;
  return best;
}

UniformizedFamily uniformize(const FunctionFamily& family, const ProbabilityMeasure& measure,
                             std::uint64_t denominator_bound, double tolerance) {
  const std::size_t n = family.domain_size();
  if (measure.size() != n) throw PreconditionError("uniformize: measure length differs from domain size");
  if (denominator_bound < 1) throw PreconditionError("uniformize: denominator bound must be >= 1");

  const auto bound = static_cast<std::int64_t>(std::min<std::uint64_t>(denominator_bound, 1ULL << 62));
  std::uint64_t common = 1;
  for (double w : measure.weights()) {
    const Rational approx = best_rational(w, bound);
    const auto den = static_cast<std::uint64_t>(approx.den);
    const std::uint64_t g = std::gcd(common, den);
    if (common / g > denominator_bound / den) {
      std::ostringstream os;
      os << "uniformize: common denominator of the weights exceeds the bound " << denominator_bound;
      throw PreconditionError(os.str());
    }
    common = common / g * den;
  }

  std::vector<std::uint64_t> copies(n);
  std::uint64_t total = 0;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = measure.weight(i) * static_cast<double>(common);
    copies[i] = static_cast<std::uint64_t>(std::llround(scaled));
    residual = std::max(residual, std::abs(measure.weight(i) - static_cast<double>(copies[i]) /
                                                                   static_cast<double>(common)));
    total += copies[i];
  }
  if (residual > tolerance || total != common) {
    std::ostringstream os;
    os.precision(6);
    os << "uniformize: weights not representable with denominator <= " << denominator_bound
       << " (residual " << residual << ")";
    throw PreconditionError(os.str());
  }

  std::vector<std::size_t> source;
  source.reserve(common);
  for (std::size_t i = 0; i < n; ++i) source.insert(source.end(), copies[i], i);
  std::vector<double> data;
  data.reserve(family.size() * source.size());
  for (std::size_t r = 0; r < family.size(); ++r) {
    for (std::size_t c : source) data.push_back(family(r, c));
  }
  PointSet values(family.size(), source.size(), std::move(data));
  FunctionFamily split = family.is_integer() ? FunctionFamily::integer_grid(std::move(values), family.range_max())
                                             : FunctionFamily::real(std::move(values));
  return {std::move(split), ProbabilityMeasure::uniform(source.size()), common, std::move(copies), residual};
}

// ---------------------------------------------------------------------------
// Discretisation

FunctionFamily discretize(const FunctionFamily& family, const ProbabilityMeasure& measure, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw PreconditionError("discretize: scale t must lie in (0, 1]");
  if (family.is_integer()) throw PreconditionError("discretize: family must be real-valued and bounded");
  if (measure.size() != family.domain_size()) {
    throw PreconditionError("discretize: measure length differs from domain size");
  }
  const int range_max = static_cast<int>(std::floor(14.0 / t));
  std::vector<double> data;
  data.reserve(family.size() * family.domain_size());
  for (double v : family.values().data()) {
    double level = std::floor(7.0 * (v + 1.0) / t);
    level = std::clamp(level, 0.0, static_cast<double>(range_max));
    data.push_back(level);
  }
  return FunctionFamily::integer_grid(PointSet(family.size(), family.domain_size(), std::move(data)), range_max);
}

// ---------------------------------------------------------------------------
// Generators

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "uniform-real") return GeneratorKind::UniformReal;
  if (name == "sign-vectors") return GeneratorKind::SignVectors;
  if (name == "integer-grid") return GeneratorKind::IntegerGrid;
  if (name == "convex-hull-sections") return GeneratorKind::ConvexHullSections;
  throw PreconditionError("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::UniformReal: return "uniform-real";
    case GeneratorKind::SignVectors: return "sign-vectors";
    case GeneratorKind::IntegerGrid: return "integer-grid";
    case GeneratorKind::ConvexHullSections: return "convex-hull-sections";
  }
  return "unknown";
}

FunctionFamily gen_random_family(std::size_t m, std::size_t n, const GeneratorSpec& spec,
                                 std::uint64_t seed) {
  if (m < 1 || n < 1) throw PreconditionError("gen_random_family: m and n must be >= 1");
  Rng rng(seed);
  std::vector<double> data(m * n);
  switch (spec.kind) {
    case GeneratorKind::UniformReal:
      for (double& v : data) v = rng.uniform(-1.0, 1.0);
      return FunctionFamily::real(PointSet(m, n, std::move(data)));
    case GeneratorKind::SignVectors:
      for (double& v : data) v = rng.rademacher();
      return FunctionFamily::real(PointSet(m, n, std::move(data)));
    case GeneratorKind::IntegerGrid: {
      if (spec.range_max < 0) throw PreconditionError("gen_random_family: range_max must be >= 0");
      const auto levels = static_cast<std::uint64_t>(spec.range_max) + 1;
      for (double& v : data) v = static_cast<double>(rng.below(levels));
      return FunctionFamily::integer_grid(PointSet(m, n, std::move(data)), spec.range_max);
    }
    case GeneratorKind::ConvexHullSections: {
      // Rows are random convex combinations of a few random sign vectors, so
      // the family lives in a low-dimensional section of the cube.
      const std::size_t anchors = std::max<std::size_t>(2, std::min<std::size_t>(n, 3));
      std::vector<double> corner(anchors * n);
      for (double& v : corner) v = rng.rademacher();
      std::vector<double> mix(anchors);
      for (std::size_t r = 0; r < m; ++r) {
        double total = 0.0;
        for (double& w : mix) {
          w = -std::log(1.0 - rng.uniform());
          total += w;
        }
        for (std::size_t c = 0; c < n; ++c) {
          double v = 0.0;
          for (std::size_t a = 0; a < anchors; ++a) v += mix[a] / total * corner[a * n + c];
          data[r * n + c] = std::clamp(v, -1.0, 1.0);
        }
      }
      return FunctionFamily::real(PointSet(m, n, std::move(data)));
    }
  }
  throw PreconditionError("gen_random_family: unknown generator kind");
}

}  // namespace combdim
