#include <benchmark/benchmark.h>

#include "tokcol/algo_rand.hpp"
#include "tokcol/engine.hpp"
#include "tokcol/verify.hpp"

namespace {

using namespace tokcol;

RunConfig cfg(Algorithm algo, int B = 0, TraceLevel lvl = TraceLevel::Metrics) {
  RunConfig c;
  c.algorithm = algo;
  c.bandwidth_B = B;
  c.trace_level = lvl;
  c.seed = 9;
  return c;
}

void BM_OneShotRing(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Topology topo = make_ring(n, 1);
  TokenAssignment tk = assign_tokens(topo, n, 16, AssignMode::Distinct, 0, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_instance(topo, tk, cfg(Algorithm::DetSmall)));
}
BENCHMARK(BM_OneShotRing)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_StreamedLongTokens(benchmark::State& state) {
  int L = static_cast<int>(state.range(0));
  Topology topo = make_ring(16, 1);
  TokenAssignment tk = assign_tokens(topo, 16, L, AssignMode::Distinct, 0, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_instance(topo, tk, cfg(Algorithm::DetLarge, 16)));
}
BENCHMARK(BM_StreamedLongTokens)->Arg(64)->Arg(256)->Arg(1024);

void BM_HashedRing(benchmark::State& state) {
  Topology topo = make_ring(static_cast<int>(state.range(0)), 1);
  TokenAssignment tk =
      assign_tokens(topo, topo.n, 128, AssignMode::Distinct, 0, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_instance(topo, tk, cfg(Algorithm::Rand)));
}
BENCHMARK(BM_HashedRing)->Arg(8)->Arg(32);

void BM_CheckTrace(benchmark::State& state) {
  Topology topo = make_random_connected(16, 0.3, 3);
  TokenAssignment tk = assign_tokens(topo, 16, 16, AssignMode::Distinct, 0, 4);
  RunResult r = run_instance(topo, tk, cfg(Algorithm::DetSmall, 0, TraceLevel::Full));
  for (auto _ : state) benchmark::DoNotOptimize(check_trace(topo, r.trace));
}
BENCHMARK(BM_CheckTrace);

void BM_TokenMod(benchmark::State& state) {
  Rng g(7);
  Token t = g.bits(static_cast<int>(state.range(0)));
  std::uint64_t p = 2305843009213693951ULL;
  for (auto _ : state) benchmark::DoNotOptimize(t.mod_u64(p));
}
BENCHMARK(BM_TokenMod)->Arg(128)->Arg(1024)->Arg(65536);

void BM_HashBuild(benchmark::State& state) {
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_hash(++s, 64, 1024, 2));
}
BENCHMARK(BM_HashBuild);

}  // namespace

BENCHMARK_MAIN();
