#include <benchmark/benchmark.h>

#include "gapjohn/coalescence.hpp"
#include "gapjohn/covering.hpp"
#include "gapjohn/john.hpp"
#include "gapjohn/oracle.hpp"
#include "gapjohn/sumset_structure.hpp"

using namespace gapjohn;

namespace {

// Rank-2 progression in Z with steps 1 and n: improper once n <= 2 * dim.
CosetProgression two_step(std::int64_t dim, std::int64_t n) {
  const AmbientGroup z = AmbientGroup::integers();
  return CosetProgression(z, Gap{{Rational(static_cast<long>(dim)), Rational(static_cast<long>(dim))},
                                 {z.element({1}), z.element({n})}},
                          FiniteSubgroup::trivial(z));
}

FiniteSet interval(std::int64_t n) {
  const AmbientGroup z = AmbientGroup::integers();
  std::vector<GroupElement> v;
  for (std::int64_t i = 0; i < n; ++i) v.push_back(z.element({i}));
  return FiniteSet(z, v);
}

}  // namespace

static void BM_Image(benchmark::State& state) {
  const auto p = two_step(state.range(0), 3 * state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(image(p, 1));
}
BENCHMARK(BM_Image)->Arg(8)->Arg(32)->Arg(128);

static void BM_OracleImage(benchmark::State& state) {
  const auto p = two_step(state.range(0), 3 * state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_image(p, 1));
}
BENCHMARK(BM_OracleImage)->Arg(8)->Arg(32)->Arg(128);

static void BM_IsProper(benchmark::State& state) {
  const auto p = two_step(state.range(0), 2 * state.range(0) + 1);
  for (auto _ : state) benchmark::DoNotOptimize(is_proper(p, 1));
}
BENCHMARK(BM_IsProper)->Arg(8)->Arg(32)->Arg(128);

static void BM_GapJohn(benchmark::State& state) {
  const auto p = two_step(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gap_john(p, 1));
}
BENCHMARK(BM_GapJohn)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GapJohnOuter(benchmark::State& state) {
  const auto p = two_step(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gap_john_outer(p, 1));
}
BENCHMARK(BM_GapJohnOuter)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_DoublingCover(benchmark::State& state) {
  const auto p = two_step(4, 50);
  for (auto _ : state) benchmark::DoNotOptimize(doubling_cover(p, Rational(state.range(0))));
}
BENCHMARK(BM_DoublingCover)->Arg(1)->Arg(2)->Arg(3);

static void BM_Coalesce(benchmark::State& state) {
  const auto p = two_step(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(coalesce(p, state.range(0)));
}
BENCHMARK(BM_Coalesce)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_IteratedStructure(benchmark::State& state) {
  const auto a = interval(3);
  for (auto _ : state) benchmark::DoNotOptimize(iterated_structure(a, state.range(0), 2));
}
BENCHMARK(BM_IteratedStructure)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Sarkozy(benchmark::State& state) {
  const AmbientGroup g = AmbientGroup::cyclic(state.range(0));
  const FiniteSet a(g, std::vector<GroupElement>{g.element({0}), g.element({1}), g.element({3})});
  for (auto _ : state) benchmark::DoNotOptimize(sarkozy_gate(a, 8, 1000));
}
BENCHMARK(BM_Sarkozy)->Arg(29)->Arg(101);
BENCHMARK_MAIN();
