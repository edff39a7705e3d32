#ifndef COMBDIM_EXTRACTION_HPP
#define COMBDIM_EXTRACTION_HPP

// Random coordinate extraction: a t-separated family on n coordinates
// (uniform measure) stays t/2-separated on a random subset sigma of at most k
// coordinates, with the uniform measure on sigma, once |A| is at most
// exp(c t^4 k) / 2. Coordinates are kept independently with probability k/(2n).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/errors.hpp"

namespace combdim {

// min(1, 2 exp(-u^2 / (2 (b2 + a u / 3)))), the Bernstein tail for a sum of
// independent centred variables bounded by a with total variance b2.
double bernstein_bound(double u, double sup_bound, double variance_sum);

struct ExtractionOutcome {
  CoordinateSubset subset;
  std::size_t attempts = 0;
  double achieved_separation = 0.0;  // min pairwise L2(mu_sigma) distance
  double target_separation = 0.0;    // t / 2
};

class ExtractionFailure : public Error {
 public:
  ExtractionFailure(const std::string& what, double best_separation)
      : Error(what), best_separation_(best_separation) {}
  double best_separation() const { return best_separation_; }

 private:
  double best_separation_;
};

// Result of one Bernoulli draw of sigma.
struct ExtractionDraw {
  CoordinateSubset subset;
  bool accepted = false;
  double separation = 0.0;  // min pairwise L2(mu_sigma) distance, 0 if sigma is empty
};

// Draw number `attempt` under `seed`; each attempt has its own derived stream.
ExtractionDraw extraction_draw(const FunctionFamily& family, double t, std::size_t k, std::uint64_t seed,
                               std::uint64_t attempt);

// Minimum pairwise L2 distance under the uniform measure on `subset`
// (+infinity for a single function).
double min_separation_on(const FunctionFamily& family, const CoordinateSubset& subset);

// First accepted draw. Draws are rejected when |sigma| > k, sigma is empty,
// or some pair is at L2(mu_sigma) distance <= t/2. Throws PreconditionError
// for k == 0 or a family that is not t-separated under the uniform measure,
// and ExtractionFailure after max_attempts rejections.
ExtractionOutcome extract_coordinates(const FunctionFamily& family, double t, std::size_t k, std::uint64_t seed,
                                      std::size_t max_attempts = 100);

// Fraction of `trials` independent single draws that are accepted.
double extraction_success_probability(const FunctionFamily& family, double t, std::size_t k, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs = 1);

struct ExtractionCurvePoint {
  std::size_t k = 0;
  double success_rate = 0.0;
  double standard_error = 0.0;
};

std::vector<ExtractionCurvePoint> extraction_curve(const FunctionFamily& family, double t,
                                                   const std::vector<std::size_t>& k_grid, std::size_t trials,
                                                   std::uint64_t seed, unsigned jobs = 1);

struct ExtractionConstantEstimate {
  std::size_t k_half = 0;     // smallest k in [1, 2n] with success >= 1/2
  double success_rate = 0.0;  // at k_half
  double constant = 0.0;      // ln(2 |A|) / (t^4 k_half)
};

// Bisects k for success level 1/2 (success is treated as monotone in k) and
// converts the result into the constant c of |A| = exp(c t^4 k) / 2.
ExtractionConstantEstimate estimate_extraction_constant(const FunctionFamily& family, double t, std::size_t trials,
                                                        std::uint64_t seed, unsigned jobs = 1);

}  // namespace combdim

#endif  // COMBDIM_EXTRACTION_HPP
