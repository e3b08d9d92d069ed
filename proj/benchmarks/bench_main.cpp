#include <benchmark/benchmark.h>

#include <random>

#include "hardynil/constants.hpp"
#include "hardynil/hardy.hpp"
#include "hardynil/nilpotent.hpp"
#include "hardynil/orbits.hpp"
#include "hardynil/windows.hpp"

using namespace hardynil;

namespace {

orbits::OrbitConfig heis_pair(orbits::Precision p) {
  orbits::OrbitConfig cfg;
  cfg.block_dims = {3, 3};
  for (std::size_t b = 0; b < 2; ++b) {
    nilpotent::Unitriangular<DD> g(3);
    g(0, 1) = value(Constant::phi);
    g(1, 2) = value(Constant::sqrt2);
    cfg.generators.push_back({b, g});
  }
  cfg.functions = {hardy::parse("t^{3/2}"), hardy::parse("t*log(t)")};
  cfg.precision = p;
  cfg.threads = 1;
  return cfg;
}

void BM_EvaluatorAt(benchmark::State& state) {
  const hardy::Evaluator f(hardy::parse("t^{3/2} + 2*t*log(t) - t^{1/3}"));
  std::int64_t n = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(f.at(n++));
}
BENCHMARK(BM_EvaluatorAt);

void BM_ReduceDD(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  nilpotent::Unitriangular<DD> g(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) g(i, j) = DD(u(rng));
  for (auto _ : state) benchmark::DoNotOptimize(nilpotent::reduce_mod_lattice(g));
}
BENCHMARK(BM_ReduceDD)->Arg(3)->Arg(5)->Arg(8);

void BM_OrbitSample(benchmark::State& state) {
  const orbits::OrbitEngine engine(heis_pair(static_cast<orbits::Precision>(state.range(0))));
  orbits::OrbitSample s;
  std::int64_t n = 1'000'000;
  for (auto _ : state) {
    engine.sample_into(n++, s);
    benchmark::DoNotOptimize(s.coords.data());
  }
}
BENCHMARK(BM_OrbitSample)
    ->Arg(static_cast<int>(orbits::Precision::double_precision))
    ->Arg(static_cast<int>(orbits::Precision::double_double));

void BM_WeylSeries(benchmark::State& state) {
  const auto cfg = heis_pair(orbits::Precision::double_double);
  const int m[] = {1, 0, 0, 1};
  const std::int64_t grid[] = {state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(orbits::weyl_series(cfg, m, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeylSeries)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

void BM_DiscrepancyValue(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  orbits::DiscrepancyAccumulator acc(static_cast<std::size_t>(dim), 8);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (int i = 0; i < 10'000; ++i) {
    for (auto& x : p) x = u(rng);
    acc.add(p);
  }
  for (auto _ : state) benchmark::DoNotOptimize(acc.value());
}
BENCHMARK(BM_DiscrepancyValue)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ObstructionSearch(benchmark::State& state) {
  const auto cfg = heis_pair(orbits::Precision::double_double);
  const auto plan = windows::find_common_window(cfg.functions);
  for (auto _ : state)
    benchmark::DoNotOptimize(orbits::obstruction_search(cfg, plan, 100'000, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ObstructionSearch)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_FindCommonWindow(benchmark::State& state) {
  const std::vector<hardy::HardyExpr> fs{hardy::parse("t^{3/2}"), hardy::parse("t*log(t)"),
                                         hardy::parse("t^{7/3}*log(t)^2")};
  for (auto _ : state) benchmark::DoNotOptimize(windows::find_common_window(fs));
}
BENCHMARK(BM_FindCommonWindow)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
