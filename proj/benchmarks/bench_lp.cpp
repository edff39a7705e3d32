#include <benchmark/benchmark.h>

#include "combdim/lp.hpp"
#include "combdim/random.hpp"

using namespace combdim;

namespace {

// Random packing LP: max c.x, A x <= b, x >= 0 with positive data.
LPProblem packing_lp(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  LPProblem p;
  p.num_variables = cols;
  p.objective.resize(cols);
  for (auto& c : p.objective) c = rng.uniform(0.5, 2.0);
  for (std::size_t r = 0; r < rows; ++r) {
    LinearConstraint row;
    row.coefficients.resize(cols);
    for (auto& a : row.coefficients) a = rng.uniform(0.1, 1.0);
    row.rhs = rng.uniform(1.0, 5.0);
    p.constraints.push_back(row);
  }
  return p;
}

void BM_LpPacking(benchmark::State& state) {
  const auto p = packing_lp(std::size_t(state.range(0)), std::size_t(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(lp_solve(p).objective);
}
BENCHMARK(BM_LpPacking)->Args({10, 20})->Args({20, 100})->Args({40, 400});

}  // namespace

BENCHMARK_MAIN();
