// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = OpenMP.

#include <benchmark/benchmark.h>

#include <cmath>

#include "ksplit/experiments.hpp"
#include "ksplit/kernels.hpp"
#include "ksplit/ksplit.hpp"
#include "ksplit/weight_spec.hpp"
#include "ksplit/weights.hpp"

using namespace ksplit;

namespace {

kernels::Exec mode(const benchmark::State& state) {
  return state.range(0) ? kernels::Exec::kParallel : kernels::Exec::kSerial;
}

void BM_MaxReduce(benchmark::State& state) {
  const auto exec = mode(state);
  const std::int64_t n = 1 << 20;
  for (auto _ : state) {
    const double m = kernels::max_reduce(
        n, [](std::int64_t i) { return std::sin(0.001 * static_cast<double>(i)); }, exec);
    benchmark::DoNotOptimize(m);
  }
}

void BM_ApConstant2D(benchmark::State& state) {
  kernels::set_default_exec(mode(state));
  const Grid1D g(64);
  const Weight2D w = build_weight_2d(parse_weight_spec("power alpha=0.5"), g, g);
  const ArcFamily fam = ArcFamily::shifted_dyadic(64);
  for (auto _ : state) benchmark::DoNotOptimize(ap_constant(w, 2.0, fam, fam));
  kernels::set_default_exec(kernels::Exec::kParallel);
}

void BM_Split(benchmark::State& state) {
  const Grid1D g(32);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  const Weight2D w = build_weight_2d(parse_weight_spec("power alpha=0.4"), g, g);
  Rng rng(1);
  const Instance inst = make_instance(CoupleSpec{one, pow(w, -1.0), 1.0, 2.0}, 3, rng);
  SplitConfig cfg;
  cfg.exec = mode(state);
  for (auto _ : state) {
    const SplitReport r = split_inf(InfProblem{inst.f, inst.g, inst.h, w, one}, cfg);
    benchmark::DoNotOptimize(r.C1);
  }
}

}  // namespace

BENCHMARK(BM_MaxReduce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApConstant2D)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Split)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
