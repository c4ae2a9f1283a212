#include <benchmark/benchmark.h>

#include "qcomp/deficiency.hpp"
#include "qcomp/discrimination.hpp"
#include "qcomp/experiments.hpp"
#include "qcomp/norms.hpp"
#include "qcomp/random.hpp"

using namespace qcomp;

namespace {

void BM_DiamondNorm(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  rng::Stream s(1);
  const HermitianMap phi = random_hermitian_map(d, d, s);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_norm(phi));
}
BENCHMARK(BM_DiamondNorm)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DualDiamondNorm(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  rng::Stream s(2);
  const HermitianMap psi = random_hermitian_map(d, d, s);
  for (auto _ : state) benchmark::DoNotOptimize(dual_diamond_norm(psi));
}
BENCHMARK(BM_DualDiamondNorm)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Deficiency(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  rng::Stream s(3);
  const HermitianMap phi = random_channel(d, d, s);
  const HermitianMap psi = random_channel(d, d, s);
  for (auto _ : state) benchmark::DoNotOptimize(deficiency(phi, psi).value);
}
BENCHMARK(BM_Deficiency)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Psucc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  rng::Stream s(4);
  const Ensemble e = random_ensemble(3, n, s);
  for (auto _ : state) benchmark::DoNotOptimize(psucc(e).value);
}
BENCHMARK(BM_Psucc)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExpDeficiency(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  rng::Stream s(5);
  const Experiment a = random_experiment(2, n, s);
  const Experiment b = random_experiment(2, n, s);
  for (auto _ : state) benchmark::DoNotOptimize(exp_deficiency(a, b).epsilon);
}
BENCHMARK(BM_ExpDeficiency)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
