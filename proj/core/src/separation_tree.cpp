#include "combdim/separation_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "combdim/errors.hpp"
#include "combdim/metric_entropy.hpp"

namespace combdim {

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw PreconditionError("distribution: no atoms");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.probability >= 0.0) || !std::isfinite(a.value)) {
      throw PreconditionError("distribution: probabilities must be non-negative and values finite");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kSumTolerance) throw PreconditionError("distribution: probabilities must sum to 1");
}

Distribution Distribution::empirical(const std::vector<double>& values) {
  if (values.empty()) throw PreconditionError("distribution: no values");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double unit = 1.0 / static_cast<double>(values.size());
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < sorted.size();) {
    std::size_t run = k;
    while (run < sorted.size() && sorted[run] == sorted[k]) ++run;
    atoms.push_back({sorted[k], static_cast<double>(run - k) * unit});
    k = run;
  }
  return Distribution(std::move(atoms));
}

double Distribution::mean() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.probability * a.value;
  return total;
}

double Distribution::prob_above(double x) const {
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value > x) total += a.probability;
  }
  return total;
}

double Distribution::prob_below(double x) const {
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value < x) total += a.probability;
  }
  return total;
}

double Distribution::mean_square_deviation(double a) const {
  double total = 0.0;
  for (const Atom& atom : atoms_) total += atom.probability * (atom.value - a) * (atom.value - a);
  return total;
}

VarianceReport variance(const Distribution& dist) {
  VarianceReport report;
  report.variance = dist.mean_square_deviation(dist.mean());
  for (const auto& x : dist.atoms()) {
    for (const auto& y : dist.atoms()) {
      report.pair_expectation += x.probability * y.probability * (x.value - y.value) * (x.value - y.value);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Small-deviation split

std::string to_string(SplitSide side) { return side == SplitSide::UpperHeavy ? "upper-heavy" : "lower-heavy"; }

bool certificate_holds(const Distribution& dist, const SplitCertificate& cert) {
  if (!(cert.beta > 0.0 && cert.beta <= 0.5)) return false;
  const double p_upper = dist.prob_above(cert.threshold + cert.gap_halfwidth);
  const double p_lower = dist.prob_below(cert.threshold - cert.gap_halfwidth);
  const double heavy = cert.side == SplitSide::UpperHeavy ? p_upper : p_lower;
  const double light = cert.side == SplitSide::UpperHeavy ? p_lower : p_upper;
  return heavy >= 1.0 - cert.beta && light >= cert.beta / 2.0;
}

namespace {

struct Candidate {
  SplitCertificate cert;
  double margin = 0.0;
};

// True if a is strictly preferable to b.
bool better(const Candidate& a, const Candidate& b) {
  if (a.margin != b.margin) return a.margin > b.margin;
  if (a.cert.beta != b.cert.beta) return a.cert.beta > b.cert.beta;
  if (a.cert.side != b.cert.side) return a.cert.side == SplitSide::UpperHeavy;
  return a.cert.threshold < b.cert.threshold;
}

std::optional<Candidate> best_beta(const Distribution& dist, double threshold, double halfwidth, SplitSide side,
                                   double p_upper, double p_lower) {
  const double heavy = side == SplitSide::UpperHeavy ? p_upper : p_lower;
  const double light = side == SplitSide::UpperHeavy ? p_lower : p_upper;
  if (!(light > 0.0)) return std::nullopt;
  const double lo = 1.0 - heavy;
  const double hi = std::min(2.0 * light, 0.5);
  if (!(lo > 0.0) || lo > hi) return std::nullopt;
  // margin(beta) = min(heavy - 1 + beta, light - beta / 2) peaks where the two terms meet.
  const double peak = 2.0 * (1.0 - heavy + light) / 3.0;
  double beta = std::clamp(peak, lo, hi);
  SplitCertificate cert{threshold, beta, halfwidth, side, p_upper, p_lower};
  if (!certificate_holds(dist, cert)) {
    // Rounding at the interval ends; try the ends themselves.
    cert.beta = hi;
    if (!certificate_holds(dist, cert)) {
      cert.beta = lo;
      if (!certificate_holds(dist, cert)) return std::nullopt;
    }
    beta = cert.beta;
  }
  return Candidate{cert, std::min(heavy - 1.0 + beta, light - beta / 2.0)};
}

}  // namespace

SplitCertificate small_dev_split(const Distribution& dist) {
  const double var = variance(dist).variance;
  if (!(var > 0.0)) throw PreconditionError("small_dev_split: distribution has zero variance");
  const double halfwidth = std::sqrt(var) / 6.0;

  std::vector<double> values;
  for (const auto& atom : dist.atoms()) {
    if (atom.probability > 0.0) values.push_back(atom.value);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // The tail sets {X > a + g} and {X < a - g} only change at a = x -/+ g, so
  // one point inside each gap between breakpoints covers every possibility.
  std::vector<double> breakpoints;
  for (double v : values) {
    breakpoints.push_back(v - halfwidth);
    breakpoints.push_back(v + halfwidth);
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::vector<double> thresholds;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    thresholds.push_back(0.5 * (breakpoints[k] + breakpoints[k + 1]));
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    thresholds.push_back(values[k]);
    if (k + 1 < values.size()) thresholds.push_back(0.5 * (values[k] + values[k + 1]));
  }

  std::optional<Candidate> best;
  for (double a : thresholds) {
    const double p_upper = dist.prob_above(a + halfwidth);
    const double p_lower = dist.prob_below(a - halfwidth);
    for (SplitSide side : {SplitSide::UpperHeavy, SplitSide::LowerHeavy}) {
      auto candidate = best_beta(dist, a, halfwidth, side, p_upper, p_lower);
      if (candidate && (!best || better(*candidate, *best))) best = candidate;
    }
  }
  if (!best) {
    // A valid split always exists for nonzero variance; reaching this is a bug.
    throw AssertionFailure("small_dev_split", "no certificate found for a nonzero-variance distribution");
  }
  return best->cert;
}

// ---------------------------------------------------------------------------
// Separating coordinate

namespace {

Distribution column_distribution(const FunctionFamily& family, std::size_t column) {
  std::vector<double> values(family.size());
  for (std::size_t r = 0; r < family.size(); ++r) values[r] = family(r, column);
  return Distribution::empirical(values);
}

SeparatingCoordinate find_coordinate_unchecked(const FunctionFamily& family, double t) {
  const std::size_t n = family.domain_size();
  std::vector<double> var(n);
  for (std::size_t i = 0; i < n; ++i) var[i] = variance(column_distribution(family, i)).variance;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return var[a] > var[b]; });

  const double halfwidth = t / 12.0;
  for (std::size_t i : order) {
    const double deviation = std::sqrt(var[i]);
    if (!(deviation / 6.0 >= halfwidth)) break;
    const Distribution dist = column_distribution(family, i);
    SplitCertificate cert = small_dev_split(dist);
    // Narrowing the band from sigma/6 to t/12 only enlarges both tails.
    cert.gap_halfwidth = halfwidth;
    cert.p_upper = dist.prob_above(cert.threshold + halfwidth);
    cert.p_lower = dist.prob_below(cert.threshold - halfwidth);
    if (!certificate_holds(dist, cert)) {
      throw AssertionFailure("find_separating_coordinate", "narrowed certificate failed to hold");
    }
    return {i, deviation, cert};
  }
  throw AssertionFailure("find_separating_coordinate",
                         "no coordinate has deviation >= t/2 although the family is t-separated");
}

void require_separated(const FunctionFamily& family, const ProbabilityMeasure& measure, double t,
                       const char* what) {
  if (!(t > 0.0)) throw PreconditionError(std::string(what) + ": scale t must be positive");
  if (measure.size() != family.domain_size()) {
    throw PreconditionError(std::string(what) + ": measure length differs from domain size");
  }
  if (const auto pair = first_unseparated_pair(family, measure, t)) {
    std::ostringstream os;
    os << what << ": family is not t-separated (rows " << pair->first << " and " << pair->second
       << " are at L2 distance " << lp_distance(family.row(pair->first), family.row(pair->second), measure)
       << " <= " << t << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace

SeparatingCoordinate find_separating_coordinate(const FunctionFamily& family, const ProbabilityMeasure& measure,
                                                double t) {
  if (family.size() < 2) throw PreconditionError("find_separating_coordinate: needs at least two functions");
  require_separated(family, measure, t, "find_separating_coordinate");
  return find_coordinate_unchecked(family, t);
}

// ---------------------------------------------------------------------------
// Trees

std::size_t SeparatingTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& node) { return !node.split.has_value(); }));
}

std::size_t SeparatingTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    deepest = std::max(deepest, level[k]);
    if (const auto& split = nodes[k].split) {
      level[split->plus_son] = level[k] + 1;
      level[split->minus_son] = level[k] + 1;
    }
  }
  return deepest;
}

SeparatingTree build_separating_tree(const FunctionFamily& family, const ProbabilityMeasure& measure, double t) {
  require_separated(family, measure, t, "build_separating_tree");
  SeparatingTree tree;
  std::vector<std::size_t> all(family.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  tree.nodes.push_back(TreeNode{std::move(all), std::nullopt});

  const double halfwidth = t / 12.0;
  // Nodes are processed in creation order; sons are appended behind their parent.
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    if (tree.nodes[k].rows.size() < 2) continue;
    const std::vector<std::size_t> rows = tree.nodes[k].rows;
    const FunctionFamily sub = family.select_rows(rows);
    const SeparatingCoordinate found = find_coordinate_unchecked(sub, t);
    const double a = found.certificate.threshold;
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    for (std::size_t r : rows) {
      const double v = family(r, found.coordinate);
      if (v > a + halfwidth) plus.push_back(r);
      if (v < a - halfwidth) minus.push_back(r);
    }
    if (plus.empty() || minus.empty()) {
      throw AssertionFailure("build_separating_tree", "split certificate produced an empty son");
    }
    TreeNode::Split split;
    split.coordinate = found.coordinate;
    split.threshold = a;
    split.gap = t / 6.0;
    split.plus_son = tree.nodes.size();
    split.minus_son = tree.nodes.size() + 1;
    tree.nodes[k].split = split;
    tree.nodes.push_back(TreeNode{std::move(plus), std::nullopt});
    tree.nodes.push_back(TreeNode{std::move(minus), std::nullopt});
  }
  return tree;
}

TreeValidation validate_tree(const SeparatingTree& tree, const FunctionFamily& family, double gap) {
  auto fail = [](const std::string& message) { return TreeValidation{false, message}; };
  if (tree.nodes.empty()) return fail("tree has no nodes");
  std::vector<int> parents(tree.nodes.size(), 0);
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const TreeNode& node = tree.nodes[k];
    const std::string where = "node " + std::to_string(k);
    if (node.rows.empty()) return fail(where + " is empty");
    for (std::size_t r : node.rows) {
      if (r >= family.size()) return fail(where + " references row " + std::to_string(r) + " outside the family");
    }
    if (!node.split) continue;
    const auto& split = *node.split;
    if (split.coordinate >= family.domain_size()) return fail(where + " splits on an invalid coordinate");
    for (std::size_t son : {split.plus_son, split.minus_son}) {
      if (son >= tree.nodes.size() || son == 0 || son == k) return fail(where + " has an invalid son index");
      if (++parents[son] > 1) return fail("node " + std::to_string(son) + " has more than one parent");
    }
    if (split.plus_son == split.minus_son) return fail(where + " has identical sons");
    std::vector<std::size_t> parent_rows = node.rows;
    std::sort(parent_rows.begin(), parent_rows.end());
    std::vector<std::size_t> plus = tree.nodes[split.plus_son].rows;
    std::vector<std::size_t> minus = tree.nodes[split.minus_son].rows;
    std::sort(plus.begin(), plus.end());
    std::sort(minus.begin(), minus.end());
    if (!std::includes(parent_rows.begin(), parent_rows.end(), plus.begin(), plus.end()) ||
        !std::includes(parent_rows.begin(), parent_rows.end(), minus.begin(), minus.end())) {
      return fail(where + " has a son that is not a subset of it");
    }
    std::vector<std::size_t> common;
    std::set_intersection(plus.begin(), plus.end(), minus.begin(), minus.end(), std::back_inserter(common));
    if (!common.empty()) return fail(where + " has overlapping sons (row " + std::to_string(common.front()) + ")");
    for (std::size_t f : plus) {
      for (std::size_t g : minus) {
        if (!(family(f, split.coordinate) > family(g, split.coordinate) + gap)) {
          std::ostringstream os;
          os << where << ": rows " << f << " (plus) and " << g << " (minus) are not separated by gap " << gap
             << " on coordinate " << split.coordinate;
          return fail(os.str());
        }
      }
    }
  }
  // Every non-root node must hang below the root.
  for (std::size_t k = 1; k < tree.nodes.size(); ++k) {
    if (parents[k] != 1) return fail("node " + std::to_string(k) + " is not attached to the tree");
  }
  return {};
}

}  // namespace combdim
