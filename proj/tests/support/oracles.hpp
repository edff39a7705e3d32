#ifndef COMBDIM_TESTS_ORACLES_HPP
#define COMBDIM_TESTS_ORACLES_HPP

// Brute-force reference implementations. Each one evaluates a definition
// directly (subset enumeration, exhaustive level scans, closed forms) and
// shares no code with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "combdim/class_model.hpp"

namespace oracle {

using combdim::FunctionFamily;

inline double l2(const FunctionFamily& a, std::size_t f, std::size_t g, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * (a(f, i) - a(g, i)) * (a(f, i) - a(g, i));
  return std::sqrt(s);
}

inline std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / double(n)); }

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

// Largest subset with all pairwise distances > t (all 2^m subsets).
inline std::size_t packing(const FunctionFamily& a, const std::vector<double>& w, double t) {
  const std::size_t m = a.size();
  std::size_t best = m > 0 ? 1 : 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (std::size_t(popcount(mask)) <= best) continue;
    bool ok = true;
    for (std::size_t f = 0; f < m && ok; ++f) {
      if (!(mask >> f & 1)) continue;
      for (std::size_t g = f + 1; g < m && ok; ++g) {
        if ((mask >> g & 1) && !(l2(a, f, g, w) > t)) ok = false;
      }
    }
    if (ok) best = popcount(mask);
  }
  return best;
}

// Fewest members whose closed t-balls cover the family.
inline std::size_t covering(const FunctionFamily& a, const std::vector<double>& w, double t) {
  const std::size_t m = a.size();
  std::size_t best = m;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (std::size_t(popcount(mask)) >= best) continue;
    bool ok = true;
    for (std::size_t g = 0; g < m && ok; ++g) {
      bool hit = false;
      for (std::size_t f = 0; f < m && !hit; ++f) hit = (mask >> f & 1) && l2(a, f, g, w) <= t;
      ok = hit;
    }
    if (ok) best = popcount(mask);
  }
  return best;
}

// Is (support, levels) shattered with strict inequalities?
inline bool center_shattered(const FunctionFamily& a, const std::vector<std::size_t>& support,
                             const std::vector<int>& levels) {
  const std::size_t d = support.size();
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << d); ++pattern) {
    bool found = false;
    for (std::size_t r = 0; r < a.size() && !found; ++r) {
      bool ok = true;
      for (std::size_t k = 0; k < d && ok; ++k) {
        const double v = a(r, support[k]);
        ok = (pattern >> k & 1) ? v > levels[k] : v < levels[k];
      }
      found = ok;
    }
    if (!found) return false;
  }
  return a.size() > 0;
}

// Calls fn(support, levels) for every shattered centre, levels over 0..range_max.
inline void for_each_center(const FunctionFamily& a,
                            const std::function<void(const std::vector<std::size_t>&, const std::vector<int>&)>& fn) {
  const std::size_t n = a.domain_size();
  const int p = a.range_max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) support.push_back(i);
    std::vector<int> levels(support.size(), 0);
    while (true) {
      if (center_shattered(a, support, levels)) fn(support, levels);
      std::size_t k = 0;
      while (k < levels.size() && levels[k] == p) levels[k++] = 0;
      if (k == levels.size()) break;
      ++levels[k];
    }
  }
}

inline std::size_t center_count(const FunctionFamily& a) {
  std::size_t count = 0;
  for_each_center(a, [&](const auto&, const auto&) { ++count; });
  return count;
}

inline std::size_t integer_vc(const FunctionFamily& a) {
  std::size_t best = 0;
  for_each_center(a, [&](const auto& s, const auto&) { best = std::max(best, s.size()); });
  return best;
}

// vc(A, t) straight from the definition, levels over every attained value
// and every attained value minus t.
inline std::size_t real_vc(const FunctionFamily& a, double t) {
  const std::size_t n = a.domain_size();
  std::vector<std::vector<double>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < a.size(); ++r) {
      candidates[i].push_back(a(r, i));
      candidates[i].push_back(a(r, i) - t);
    }
  }
  std::size_t best = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) support.push_back(i);
    if (support.size() <= best) continue;
    std::vector<std::size_t> pick(support.size(), 0);
    bool shattered = false;
    while (!shattered) {
      bool all = true;
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << support.size()) && all; ++sub) {
        bool found = false;
        for (std::size_t r = 0; r < a.size() && !found; ++r) {
          bool ok = true;
          for (std::size_t k = 0; k < support.size() && ok; ++k) {
            const double h = candidates[support[k]][pick[k]];
            const double v = a(r, support[k]);
            ok = (sub >> k & 1) ? v <= h : v >= h + t;
          }
          found = ok;
        }
        all = found;
      }
      shattered = all;
      std::size_t k = 0;
      while (k < pick.size() && pick[k] + 1 == candidates[support[k]].size()) pick[k++] = 0;
      if (k == pick.size()) break;
      ++pick[k];
    }
    if (shattered) best = support.size();
  }
  return best;
}

// P{1 <= Bin(n, p) <= k}.
inline double binomial_window(std::size_t n, double p, std::size_t k) {
  double total = 0.0;
  for (std::size_t j = 1; j <= std::min(n, k); ++j) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)) *
             std::pow(p, double(j)) * std::pow(1.0 - p, double(n - j));
  }
  return total;
}

// Composite Simpson rule on [a, b] with `panels` (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  const double h = (b - a) / double(panels);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < panels; ++k) s += f(a + h * double(k)) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline constexpr double kSqrtTwoOverPi = 0.79788456080286535588;

}  // namespace oracle

#endif  // COMBDIM_TESTS_ORACLES_HPP
