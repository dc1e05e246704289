#include <benchmark/benchmark.h>

#include "coarsetop/coarse.hpp"
#include "coarsetop/complex.hpp"
#include "coarsetop/duality.hpp"
#include "coarsetop/homology.hpp"
#include "coarsetop/products_selftest.hpp"
#include "coarsetop/separation.hpp"
#include "coarsetop/window.hpp"

using namespace coarsetop;

// Tuple enumeration on a ℤ² window; arg = W.
static void BM_Enumerate(benchmark::State& state) {
  const auto w = WindowFamily::grid(2).window(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const auto K = TruncatedComplex::enumerate(w, 2, 1);
    benchmark::DoNotOptimize(K->count(2));
  }
  state.counters["points"] = static_cast<double>(w->size());
}
BENCHMARK(BM_Enumerate)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// ∂₂ rank over GF(2) and Smith normal form over ℤ; arg = W.
static void BM_RankGf2(benchmark::State& state) {
  const auto w = WindowFamily::grid(2).window(static_cast<double>(state.range(0)));
  const auto K = TruncatedComplex::enumerate(w, 2, 1);
  const auto m = boundary_matrix<Gf2>(*K, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rank_gf2(m));
  state.counters["cols"] = static_cast<double>(m.cols);
}
BENCHMARK(BM_RankGf2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SmithNormalForm(benchmark::State& state) {
  const auto w = WindowFamily::grid(2).window(static_cast<double>(state.range(0)));
  const auto K = TruncatedComplex::enumerate(w, 2, 1);
  const auto m = boundary_matrix<Integer>(*K, 1);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m, true).rank);
  state.counters["cols"] = static_cast<double>(m.cols);
}
BENCHMARK(BM_SmithNormalForm)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

// Full deep-separation sweep on ℤ² with the default schedule.
static void BM_SeparationSweep(benchmark::State& state) {
  const auto z2 = WindowFamily::grid(2);
  const auto A = resolver(z2, SubsetSpec::parse("union(axis:0,axis:1)"));
  const auto schedule = ScaleSchedule::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(deep_separation_rank(z2, A, schedule).k);
}
BENCHMARK(BM_SeparationSweep)->Unit(benchmark::kMillisecond);

// Acyclic-models homotopy for A∘S; arg = max bidegree.
static void BM_AsHomotopySolver(benchmark::State& state) {
  for (auto _ : state) {
    const auto rep = run_as_branch({.max_degree = static_cast<int>(state.range(0)), .symbols = 4, .direct_samples = 100});
    benchmark::DoNotOptimize(rep.solved);
  }
}
BENCHMARK(BM_AsHomotopySolver)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

// ℤ¹ orientation pair verification; arg = W, scale W/8.
static void BM_VerifyZ1Pair(benchmark::State& state) {
  const auto line = WindowFamily::grid(1);
  const double W = static_cast<double>(state.range(0));
  const auto pair = build_z1_pair(line, W);
  for (auto _ : state) benchmark::DoNotOptimize(verify_pair(pair, W / 8).passed());
}
BENCHMARK(BM_VerifyZ1Pair)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
