#include "combdim/metric_entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "combdim/errors.hpp"

namespace combdim {

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaskBits = 64;

Mask bit(std::size_t i) { return Mask{1} << i; }

void check_scale(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("scale t must be a positive finite number");
}

void check_exact_size(std::size_t m, std::size_t limit, const EntropyOptions& options, const char* what) {
  if (m > kMaskBits) {
    throw BudgetExceeded(std::string(what) + ": exact mode supports at most 64 functions");
  }
  if (m > limit && !options.force) {
    throw BudgetExceeded(std::string(what) + ": family has " + std::to_string(m) +
                         " functions, above the exact-mode limit " + std::to_string(limit) +
                         " (use force or greedy mode)");
  }
}

std::vector<std::size_t> mask_to_indices(Mask mask) {
  std::vector<std::size_t> out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Maximum clique with greedy-colouring bounds (Tomita-style).
class MaxClique {
 public:
  explicit MaxClique(std::vector<Mask> adjacency) : adj_(std::move(adjacency)) {}

  Mask solve() {
    Mask all = 0;
    for (std::size_t v = 0; v < adj_.size(); ++v) all |= bit(v);
    expand(0, all);
    return best_;
  }

 private:
  void expand(Mask current, Mask candidates) {
    if (candidates == 0) {
      if (std::popcount(current) > std::popcount(best_)) best_ = current;
      return;
    }
    // Colour classes give an upper bound on the clique size reachable.
    std::vector<std::size_t> order;
    std::vector<int> colour;
    Mask uncoloured = candidates;
    int c = 0;
    while (uncoloured != 0) {
      ++c;
      Mask available = uncoloured;
      while (available != 0) {
        const auto v = static_cast<std::size_t>(std::countr_zero(available));
        available &= ~bit(v) & ~adj_[v];
        uncoloured &= ~bit(v);
        order.push_back(v);
        colour.push_back(c);
      }
    }
    const int current_size = std::popcount(current);
    for (std::size_t k = order.size(); k-- > 0;) {
      if (current_size + colour[k] <= std::popcount(best_)) return;
      const std::size_t v = order[k];
      expand(current | bit(v), candidates & adj_[v]);
      candidates &= ~bit(v);
    }
  }

  std::vector<Mask> adj_;
  Mask best_ = 0;
};

// Minimum set cover of {0..m-1} by the given balls.
class SetCover {
 public:
  SetCover(std::vector<Mask> balls, std::size_t m) : balls_(std::move(balls)), m_(m) {
    for (std::size_t e = 0; e < m_; ++e) {
      for (std::size_t s = 0; s < balls_.size(); ++s) {
        if ((balls_[s] & bit(e)) != 0) covering_[e].push_back(s);
      }
    }
    for (Mask b : balls_) largest_ = std::max(largest_, std::popcount(b));
  }

  std::vector<std::size_t> solve(std::vector<std::size_t> upper_bound) {
    best_ = std::move(upper_bound);
    std::vector<std::size_t> chosen;
    const Mask universe = m_ == kMaskBits ? ~Mask{0} : bit(m_) - 1;
    search(universe, chosen);
    return best_;
  }

 private:
  void search(Mask uncovered, std::vector<std::size_t>& chosen) {
    if (uncovered == 0) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    const auto remaining = static_cast<std::size_t>(std::popcount(uncovered));
    const std::size_t lower = (remaining + static_cast<std::size_t>(largest_) - 1) / static_cast<std::size_t>(largest_);
    if (chosen.size() + lower >= best_.size()) return;
    // Branch on the uncovered element with the fewest covering balls.
    std::size_t pick = 0;
    std::size_t fewest = balls_.size() + 1;
    for (Mask u = uncovered; u != 0; u &= u - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(u));
      if (covering_[e].size() < fewest) {
        fewest = covering_[e].size();
        pick = e;
      }
    }
    std::vector<std::size_t> options = covering_[pick];
    std::sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      const int ga = std::popcount(balls_[a] & uncovered);
      const int gb = std::popcount(balls_[b] & uncovered);
      return ga != gb ? ga > gb : a < b;
    });
    for (std::size_t s : options) {
      chosen.push_back(s);
      search(uncovered & ~balls_[s], chosen);
      chosen.pop_back();
    }
  }

  std::vector<Mask> balls_;
  std::size_t m_;
  std::vector<std::size_t> covering_[kMaskBits];
  int largest_ = 1;
  std::vector<std::size_t> best_;
};

std::vector<std::size_t> greedy_cover(const std::vector<double>& dist, std::size_t m, double t) {
  std::vector<bool> covered(m, false);
  std::size_t remaining = m;
  std::vector<std::size_t> centres;
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t gain = 0;
      for (std::size_t e = 0; e < m; ++e) {
        if (!covered[e] && dist[c * m + e] <= t) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    centres.push_back(best);
    for (std::size_t e = 0; e < m; ++e) {
      if (!covered[e] && dist[best * m + e] <= t) {
        covered[e] = true;
        --remaining;
      }
    }
  }
  return centres;
}

}  // namespace

double lp_distance(std::span<const double> f, std::span<const double> g, const ProbabilityMeasure& measure,
                   double p) {
  if (f.size() != g.size() || f.size() != measure.size()) {
    throw PreconditionError("lp_distance: row lengths and measure length must agree");
  }
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (measure.weight(i) > 0.0) worst = std::max(worst, std::abs(f[i] - g[i]));
    }
    return worst;
  }
  if (!(p >= 1.0)) throw PreconditionError("lp_distance: p must be >= 1");
  double total = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = f[i] - g[i];
      total += measure.weight(i) * d * d;
    }
    return std::sqrt(total);
  }
  for (std::size_t i = 0; i < f.size(); ++i) total += measure.weight(i) * std::pow(std::abs(f[i] - g[i]), p);
  return std::pow(total, 1.0 / p);
}

std::vector<double> pairwise_distances(const FunctionFamily& family, const ProbabilityMeasure& measure,
                                       double p) {
  const std::size_t m = family.size();
  std::vector<double> dist(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = lp_distance(family.row(i), family.row(j), measure, p);
      dist[i * m + j] = d;
      dist[j * m + i] = d;
    }
  }
  return dist;
}

std::optional<std::pair<std::size_t, std::size_t>> first_unseparated_pair(const FunctionFamily& family,
                                                                          const ProbabilityMeasure& measure,
                                                                          double t, double p) {
  check_scale(t);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (!(lp_distance(family.row(i), family.row(j), measure, p) > t)) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

bool is_separated(const FunctionFamily& family, const ProbabilityMeasure& measure, double t, double p) {
  return !first_unseparated_pair(family, measure, t, p).has_value();
}

double diameter(const FunctionFamily& family, const ProbabilityMeasure& measure, double p) {
  const auto dist = pairwise_distances(family, measure, p);
  return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

std::string to_string(CountFlag flag) {
  switch (flag) {
    case CountFlag::Exact: return "exact";
    case CountFlag::LowerBound: return "lower-bound";
    case CountFlag::UpperBound: return "upper-bound";
  }
  return "unknown";
}

EntropyMode parse_entropy_mode(const std::string& name) {
  if (name == "exact") return EntropyMode::Exact;
  if (name == "greedy") return EntropyMode::Greedy;
  throw PreconditionError("unknown entropy mode '" + name + "' (expected exact or greedy)");
}

EntropyCount packing_number(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                            const EntropyOptions& options) {
  check_scale(t);
  const std::size_t m = family.size();
  const auto dist = pairwise_distances(family, measure, options.p);
  EntropyCount result;
  if (options.mode == EntropyMode::Greedy) {
    for (std::size_t i = 0; i < m; ++i) {
      const bool far = std::all_of(result.witness.begin(), result.witness.end(),
                                   [&](std::size_t j) { return dist[i * m + j] > t; });
      if (far) result.witness.push_back(i);
    }
    result.count = result.witness.size();
    result.flag = CountFlag::LowerBound;
    return result;
  }
  check_exact_size(m, options.exact_packing_limit, options, "packing_number");
  std::vector<Mask> adjacency(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && dist[i * m + j] > t) adjacency[i] |= bit(j);
    }
  }
  Mask best = MaxClique(std::move(adjacency)).solve();
  if (best == 0) best = bit(0);
  result.witness = mask_to_indices(best);
  result.count = result.witness.size();
  result.flag = CountFlag::Exact;
  return result;
}

EntropyCount covering_number(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                             const EntropyOptions& options) {
  check_scale(t);
  const std::size_t m = family.size();
  const auto dist = pairwise_distances(family, measure, options.p);
  EntropyCount result;
  auto greedy = greedy_cover(dist, m, t);
  if (options.mode == EntropyMode::Greedy) {
    result.witness = std::move(greedy);
    result.count = result.witness.size();
    result.flag = CountFlag::UpperBound;
    return result;
  }
  check_exact_size(m, options.exact_covering_limit, options, "covering_number");
  std::vector<Mask> balls(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t e = 0; e < m; ++e) {
      if (dist[c * m + e] <= t) balls[c] |= bit(e);
    }
  }
  // The greedy cover seeds the incumbent; search only accepts strictly smaller covers.
  result.witness = SetCover(std::move(balls), m).solve(std::move(greedy));
  std::sort(result.witness.begin(), result.witness.end());
  result.count = result.witness.size();
  result.flag = CountFlag::Exact;
  return result;
}

EntropyReport entropy_report(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                             const EntropyOptions& options) {
  return {t, packing_number(family, measure, t, options), covering_number(family, measure, t, options)};
}

}  // namespace combdim
