// Serial against OpenMP paths of the sampled kernels.

#include <benchmark/benchmark.h>

#include "dvr/floerlab.hpp"
#include "dvr/limits.hpp"
#include "dvr/sampling.hpp"

using namespace dvr;

namespace {

DirectedSystem<Rational> random_system(int rank, int steps) {
  Sampler s(42);
  DirectedSystem<Rational> sys;
  sys.rank = rank;
  for (int k = 0; k < steps; ++k) {
    QMatrix Q = s.invertible(rank, 16);
    QMatrix D = QMatrix::identity(rank);
    D(rank - 1, rank - 1) = QSeries::monomial(Rational(1), 1);
    sys.steps.push_back(Q * D);
  }
  return sys;
}

void BM_FactorTable(benchmark::State& state) {
  const Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
  DirectedSystem<Rational> sys = random_system(4, 10);
  for (auto _ : state) benchmark::DoNotOptimize(composite_factor_table(sys, 10, exec));
}
BENCHMARK(BM_FactorTable)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_TCP1Report(benchmark::State& state) {
  const Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
  Sampler s(7);
  TCP1Params p = TCP1Params::sample(6, s);
  for (auto _ : state) benchmark::DoNotOptimize(tcp1_report(p, exec));
}
BENCHMARK(BM_TCP1Report)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_SmithNormalForm(benchmark::State& state) {
  Sampler s(3);
  const int n = int(state.range(0));
  QMatrix a = s.matrix(n, n, 16, 4, 0.2);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(smith_normal_form(a));
    } catch (const PrecisionError&) {
    }
  }
}
BENCHMARK(BM_SmithNormalForm)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
