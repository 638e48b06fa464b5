#include <benchmark/benchmark.h>

#include <random>

#include "dtw/generators.hpp"
#include "dtw/group_cochains.hpp"
#include "dtw/patching.hpp"
#include "dtw/smith.hpp"
#include "dtw/tor.hpp"

namespace {

using namespace dtw;

void BM_Smith(benchmark::State& st) {
  const int n = int(st.range(0));
  std::mt19937_64 rng(42);
  Wn W(3, 3);
  WMat A(n, n, W);
  for (auto& x : A.a) x = W.red(i64(rng() % 27));
  for (auto _ : st) benchmark::DoNotOptimize(smith(A, kTrackP | kTrackQ).rank);
}
BENCHMARK(BM_Smith)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Homology(benchmark::State& st) {
  std::mt19937_64 rng(7);
  ChainComplex C = random_complex(rng, Wn(2, 3), 0, int(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(homology(C));
}
BENCHMARK(BM_Homology)->Arg(3)->Arg(6);

void BM_Cochains(benchmark::State& st) {
  FiniteGroup G = FiniteGroup::cyclic(int(st.range(0)));
  GModule M = GModule::trivial(G, 3, {1});
  for (auto _ : st) {
    Cochains C = cochain_complex(G, M, 4);
    benchmark::DoNotOptimize(C.cohomology(3).divisors());
  }
}
BENCHMARK(BM_Cochains)->Arg(3)->Arg(4)->Arg(6);

void BM_KoszulTor(benchmark::State& st) {
  const int s = int(st.range(0));
  TorRing R = TorRing::from_poly(PolyQuotientRing{Wn(2, 2), s, false, 3, {}});
  for (auto _ : st) benchmark::DoNotOptimize(tor(R, augmentation_ideal(s), augmentation_ideal(s), s + 1).H.rank(1));
}
BENCHMARK(BM_KoszulTor)->Arg(1)->Arg(2)->Arg(3);

void BM_LimitPi(benchmark::State& st) {
  PatchScenario sc;
  sc.p = 3;
  sc.s = int(st.range(0));
  sc.delta = int(st.range(1));
  sc.levels = {1, 2, 3};
  sc.maxdeg = sc.delta + 2;
  for (auto _ : st) benchmark::DoNotOptimize(limit_pi(sc).ranks_match);
}
BENCHMARK(BM_LimitPi)->Args({1, 1})->Args({2, 2})->Args({3, 2})->Unit(benchmark::kMillisecond);

void BM_CgCheck(benchmark::State& st) {
  std::mt19937_64 rng(5);
  std::vector<CgInput> in;
  for (int k = 0; k < 12; ++k) in.push_back(random_cg_instance(rng, CgKind(k % 3)));
  for (auto _ : st)
    for (const auto& x : in) benchmark::DoNotOptimize(cg_check(x).pass);
}
BENCHMARK(BM_CgCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
