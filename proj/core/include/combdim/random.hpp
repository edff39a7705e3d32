#ifndef COMBDIM_RANDOM_HPP
#define COMBDIM_RANDOM_HPP

#include <cstdint>
#include <random>

namespace combdim {

// SplitMix64 finaliser; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` under `seed`. Streams are what make parallel runs
// reproducible: work item i always draws from derive_seed(seed, i).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

/*
  Reproducible random source. The engine is std::mt19937_64, whose output
  sequence is fixed by the standard; the distributions below are written out
  by hand because the std:: distributions are implementation-defined and
  would break bit-exact reports across standard libraries.

  Gaussian variates use the Marsaglia polar method; the spare variate of each
  accepted pair is cached and returned by the next call.
*/
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  double gaussian();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace combdim

#endif  // COMBDIM_RANDOM_HPP
