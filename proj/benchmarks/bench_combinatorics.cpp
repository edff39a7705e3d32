#include <benchmark/benchmark.h>

#include "combdim/class_model.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/separation_tree.hpp"
#include "combdim/shattering.hpp"

using namespace combdim;

namespace {

void BM_ExactPacking(benchmark::State& state) {
  const auto a = gen_random_family(std::size_t(state.range(0)), 6, {GeneratorKind::UniformReal}, 3);
  const auto mu = ProbabilityMeasure::uniform(6);
  for (auto _ : state) benchmark::DoNotOptimize(packing_number(a, mu, 0.4).count);
}
BENCHMARK(BM_ExactPacking)->Arg(10)->Arg(20)->Arg(30);

void BM_ExactCovering(benchmark::State& state) {
  const auto a = gen_random_family(std::size_t(state.range(0)), 6, {GeneratorKind::UniformReal}, 3);
  const auto mu = ProbabilityMeasure::uniform(6);
  for (auto _ : state) benchmark::DoNotOptimize(covering_number(a, mu, 0.4).count);
}
BENCHMARK(BM_ExactCovering)->Arg(10)->Arg(20)->Arg(25);

void BM_VcReal(benchmark::State& state) {
  const auto a = gen_random_family(16, std::size_t(state.range(0)), {GeneratorKind::SignVectors}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(vc_real(a, 1.0));
}
BENCHMARK(BM_VcReal)->Arg(4)->Arg(8)->Arg(12);

void BM_ShatteredCentres(benchmark::State& state) {
  const auto a = gen_random_family(12, std::size_t(state.range(0)), {GeneratorKind::IntegerGrid, 4}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(count_shattered_centers(a));
}
BENCHMARK(BM_ShatteredCentres)->Arg(3)->Arg(5)->Arg(7);

void BM_SeparatingTree(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const auto raw = gen_random_family(20, n, {GeneratorKind::SignVectors}, 9);
  const auto mu = ProbabilityMeasure::uniform(n);
  const auto a = raw.select_rows(packing_number(raw, mu, 0.5).witness);
  for (auto _ : state) benchmark::DoNotOptimize(build_separating_tree(a, mu, 0.5).leaf_count());
}
BENCHMARK(BM_SeparatingTree)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
