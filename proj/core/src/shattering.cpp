#include "combdim/shattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "combdim/errors.hpp"

namespace combdim {

namespace {

constexpr std::uint32_t kInvalid = 0xffffffffU;
constexpr std::size_t kMaxPatternBits = 30;

std::size_t distinct_row_count(const FunctionFamily& family) {
  std::set<std::vector<double>> rows;
  for (std::size_t r = 0; r < family.size(); ++r) rows.emplace(family.row(r).begin(), family.row(r).end());
  return rows.size();
}

void require_integer(const FunctionFamily& family, const char* what) {
  if (!family.is_integer()) throw PreconditionError(std::string(what) + ": family must be integer-valued");
}

// True iff every pattern in [0, 2^dim) occurs among the valid codes.
bool covers_all_patterns(const std::vector<std::uint32_t>& codes, std::size_t dim, std::vector<char>& scratch) {
  const std::size_t total = std::size_t{1} << dim;
  scratch.assign(total, 0);
  std::size_t seen = 0;
  for (std::uint32_t code : codes) {
    if (code == kInvalid || scratch[code] != 0) continue;
    scratch[code] = 1;
    if (++seen == total) return true;
  }
  return false;
}

/*
  Depth-first walk over shattered integer centres. Every shattered centre of
  dimension k+1 extends the shattered centre obtained by dropping its largest
  coordinate, so extending only by coordinates above the current maximum
  visits each shattered centre exactly once.
*/
class CenterWalker {
 public:
  CenterWalker(const FunctionFamily& family, std::size_t max_dim, std::uint64_t budget)
      : family_(family), max_dim_(max_dim), budget_(budget), distinct_(distinct_row_count(family)) {}

  void run(const std::function<void(const std::vector<std::size_t>&, const std::vector<int>&)>& visit) {
    visit_ = &visit;
    std::vector<std::uint32_t> codes(family_.size(), 0);
    support_.clear();
    levels_.clear();
    (*visit_)(support_, levels_);
    descend(codes, 0);
  }

 private:
  void descend(const std::vector<std::uint32_t>& codes, std::size_t first) {
    const std::size_t dim = support_.size();
    if (dim >= max_dim_ || dim >= kMaxPatternBits) return;
    if ((std::size_t{1} << (dim + 1)) > distinct_) return;
    std::vector<std::uint32_t> next(codes.size());
    std::vector<char> scratch;
    for (std::size_t j = first; j < family_.domain_size(); ++j) {
      int lo = family_.range_max() + 1;
      int hi = -1;
      for (std::size_t r = 0; r < codes.size(); ++r) {
        if (codes[r] == kInvalid) continue;
        lo = std::min(lo, family_.level(r, j));
        hi = std::max(hi, family_.level(r, j));
      }
      for (int h = lo + 1; h < hi; ++h) {
        if (++examined_ > budget_) {
          throw BudgetExceeded("shattered-centre enumeration exceeded its budget of " + std::to_string(budget_) +
                               " candidate centres");
        }
        for (std::size_t r = 0; r < codes.size(); ++r) {
          const int v = family_.level(r, j);
          next[r] = (codes[r] == kInvalid || v == h) ? kInvalid
                                                       : (codes[r] | (v > h ? (std::uint32_t{1} << dim) : 0U));
        }
        if (!covers_all_patterns(next, dim + 1, scratch)) continue;
        support_.push_back(j);
        levels_.push_back(h);
        (*visit_)(support_, levels_);
        descend(next, j + 1);
        support_.pop_back();
        levels_.pop_back();
      }
    }
  }

  const FunctionFamily& family_;
  std::size_t max_dim_;
  std::uint64_t budget_;
  std::size_t distinct_;
  std::uint64_t examined_ = 0;
  std::vector<std::size_t> support_;
  std::vector<int> levels_;
  const std::function<void(const std::vector<std::size_t>&, const std::vector<int>&)>* visit_ = nullptr;
};

}  // namespace

std::optional<ShatterWitness> shatters(const FunctionFamily& family, const Center& center) {
  require_integer(family, "shatters");
  center.support.check_within(family.domain_size());
  if (center.levels.size() != center.support.size()) {
    throw PreconditionError("shatters: level count differs from support size");
  }
  const std::size_t dim = center.dimension();
  if (dim > kMaxPatternBits) throw BudgetExceeded("shatters: centre dimension too large");
  ShatterWitness witness{center, {}};
  if (family.size() == 0) return std::nullopt;
  if (dim == 0) {
    witness.assignments = {0};
    return witness;
  }
  const std::size_t total = std::size_t{1} << dim;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  witness.assignments.assign(total, kUnset);
  std::size_t found = 0;
  for (std::size_t r = 0; r < family.size() && found < total; ++r) {
    std::size_t code = 0;
    bool valid = true;
    for (std::size_t k = 0; k < dim && valid; ++k) {
      const int v = family.level(r, center.support[k]);
      if (v == center.levels[k]) valid = false;
      if (v > center.levels[k]) code |= std::size_t{1} << k;
    }
    if (valid && witness.assignments[code] == kUnset) {
      witness.assignments[code] = r;
      ++found;
    }
  }
  if (found < total) return std::nullopt;
  return witness;
}

bool verify_witness(const FunctionFamily& family, const ShatterWitness& witness) {
  const Center& center = witness.center;
  if (center.levels.size() != center.support.size()) return false;
  if (!center.support.empty() && center.support.indices().back() >= family.domain_size()) return false;
  const std::size_t dim = center.dimension();
  if (dim == 0) return family.size() > 0;
  if (witness.assignments.size() != (std::size_t{1} << dim)) return false;
  for (std::size_t pattern = 0; pattern < witness.assignments.size(); ++pattern) {
    const std::size_t r = witness.assignments[pattern];
    if (r >= family.size()) return false;
    for (std::size_t k = 0; k < dim; ++k) {
      const int v = family.level(r, center.support[k]);
      const bool up = ((pattern >> k) & 1U) != 0;
      if (up ? !(v > center.levels[k]) : !(v < center.levels[k])) return false;
    }
  }
  return true;
}

std::vector<Center> enumerate_shattered_centers(const FunctionFamily& family, std::size_t max_dim,
                                                std::uint64_t budget) {
  require_integer(family, "enumerate_shattered_centers");
  std::vector<Center> centers;
  CenterWalker walker(family, max_dim, budget);
  walker.run([&](const std::vector<std::size_t>& support, const std::vector<int>& levels) {
    centers.push_back(Center{CoordinateSubset(support), levels});
  });
  std::sort(centers.begin(), centers.end(), [](const Center& a, const Center& b) {
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    return a < b;
  });
  return centers;
}

std::uint64_t count_shattered_centers(const FunctionFamily& family, std::uint64_t budget) {
  require_integer(family, "count_shattered_centers");
  std::uint64_t count = 0;
  CenterWalker walker(family, family.domain_size(), budget);
  walker.run([&](const std::vector<std::size_t>&, const std::vector<int>&) { ++count; });
  return count;
}

std::size_t vc_integer(const FunctionFamily& family, std::uint64_t budget) {
  require_integer(family, "vc_integer");
  std::size_t best = 0;
  CenterWalker walker(family, family.domain_size(), budget);
  walker.run([&](const std::vector<std::size_t>& support, const std::vector<int>&) {
    best = std::max(best, support.size());
  });
  return best;
}

// ---------------------------------------------------------------------------
// Real t-shattering

bool is_t_shattered(const FunctionFamily& family, const CoordinateSubset& support, std::span<const double> levels,
                    double t) {
  support.check_within(family.domain_size());
  if (levels.size() != support.size()) throw PreconditionError("is_t_shattered: level count differs from support");
  const std::size_t dim = support.size();
  if (dim > kMaxPatternBits) throw BudgetExceeded("is_t_shattered: support too large");
  std::vector<std::uint32_t> codes(family.size(), 0);
  for (std::size_t r = 0; r < family.size(); ++r) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = family(r, support[k]);
      if (v >= levels[k] + t) {
        codes[r] |= std::uint32_t{1} << k;
      } else if (!(v <= levels[k])) {
        codes[r] = kInvalid;
        break;
      }
    }
  }
  std::vector<char> scratch;
  return covers_all_patterns(codes, dim, scratch);
}

namespace {

class RealShatterSearch {
 public:
  RealShatterSearch(const FunctionFamily& family, double t, std::uint64_t budget)
      : family_(family), t_(t), budget_(budget), distinct_(distinct_row_count(family)) {
    attained_.resize(family.domain_size());
    for (std::size_t j = 0; j < family.domain_size(); ++j) {
      std::vector<double>& values = attained_[j];
      for (std::size_t r = 0; r < family.size(); ++r) values.push_back(family(r, j));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
    }
  }

  RealShatterResult run() {
    std::vector<std::uint32_t> codes(family_.size(), 0);
    descend(codes, 0);
    return best_;
  }

 private:
  void descend(const std::vector<std::uint32_t>& codes, std::size_t first) {
    const std::size_t dim = support_.size();
    if (dim > best_.dimension) {
      best_.dimension = dim;
      best_.support = CoordinateSubset(support_);
      best_.levels = levels_;
    }
    if (dim >= kMaxPatternBits) return;
    if ((std::size_t{1} << (dim + 1)) > distinct_) return;
    std::vector<std::uint32_t> next(codes.size());
    std::vector<char> scratch;
    for (std::size_t j = first; j < family_.domain_size(); ++j) {
      // Even taking every remaining coordinate cannot beat the incumbent.
      if (dim + (family_.domain_size() - j) <= best_.dimension) return;
      for (double h : attained_[j]) {
        if (++examined_ > budget_) {
          throw BudgetExceeded("vc_real: search exceeded its budget of " + std::to_string(budget_) +
                               " candidate (support, level) pairs");
        }
        bool any_below = false;
        bool any_above = false;
        for (std::size_t r = 0; r < codes.size(); ++r) {
          if (codes[r] == kInvalid) {
            next[r] = kInvalid;
            continue;
          }
          const double v = family_(r, j);
          if (v >= h + t_) {
            next[r] = codes[r] | (std::uint32_t{1} << dim);
            any_above = true;
          } else if (v <= h) {
            next[r] = codes[r];
            any_below = true;
          } else {
            next[r] = kInvalid;
          }
        }
        if (!any_below || !any_above) continue;
        if (!covers_all_patterns(next, dim + 1, scratch)) continue;
        support_.push_back(j);
        levels_.push_back(h);
        descend(next, j + 1);
        support_.pop_back();
        levels_.pop_back();
      }
    }
  }

  const FunctionFamily& family_;
  double t_;
  std::uint64_t budget_;
  std::size_t distinct_;
  std::uint64_t examined_ = 0;
  std::vector<std::vector<double>> attained_;
  std::vector<std::size_t> support_;
  std::vector<double> levels_;
  RealShatterResult best_;
};

}  // namespace

RealShatterResult vc_real_witness(const FunctionFamily& family, double t, std::uint64_t budget) {
  if (!(t > 0.0)) throw PreconditionError("vc_real: scale t must be positive");
  return RealShatterSearch(family, t, budget).run();
}

std::size_t vc_real(const FunctionFamily& family, double t, std::uint64_t budget) {
  return vc_real_witness(family, t, budget).dimension;
}

std::vector<std::pair<double, std::size_t>> vc_curve(const FunctionFamily& family, std::span<const double> t_grid,
                                                     std::uint64_t budget) {
  std::vector<std::pair<double, std::size_t>> curve;
  curve.reserve(t_grid.size());
  for (double t : t_grid) curve.emplace_back(t, vc_real(family, t, budget));
  auto sorted = curve;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].second > sorted[k - 1].second) {
      throw AssertionFailure("vc_curve", "shattering dimension increased with the scale");
    }
  }
  return curve;
}

}  // namespace combdim
