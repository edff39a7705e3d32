#include <benchmark/benchmark.h>

#include "combdim/gaussian_elton.hpp"
#include "combdim/geometry.hpp"

using namespace combdim;

namespace {

void BM_Ell1Constant(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const auto inst = random_norm_instance(n, 3 * n, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(ell1_lower_constant(inst.norm, inst.vectors, CoordinateSubset::all(n)).value);
}
BENCHMARK(BM_Ell1Constant)->Arg(3)->Arg(5)->Arg(7);

void BM_Ell1ConstantPrimal(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const auto inst = random_norm_instance(n, 3 * n, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(ell1_lower_constant_primal(inst.norm, inst.vectors, CoordinateSubset::all(n)).value);
}
BENCHMARK(BM_Ell1ConstantPrimal)->Arg(3)->Arg(5);

void BM_ConvexVcCross(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
  const auto cross = VPolytope::symmetric_hull(PointSet(n, n, data));
  for (auto _ : state) benchmark::DoNotOptimize(convex_vc(cross, 2.0 / double(n)).dimension);
}
BENCHMARK(BM_ConvexVcCross)->Arg(4)->Arg(6)->Arg(8);

}  // namespace
