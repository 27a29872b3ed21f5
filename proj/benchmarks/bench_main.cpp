#include <benchmark/benchmark.h>

#include "medf/family.hpp"
#include "medf/mangle.hpp"
#include "medf/tree.hpp"

using namespace medf;

static void BM_EncodeDecodeRoundTrip(benchmark::State& state) {
  BigInt n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_seq(decode_code(n)));
    n = (n + 17) % 100000;
  }
}
BENCHMARK(BM_EncodeDecodeRoundTrip);

static void BM_PrefixCodeEquality(benchmark::State& state) {
  auto f = make_periodic({1}, {0, 2});
  auto g = make_periodic({1}, {0, 3});
  BigInt n(state.range(0));
  Nat a = e_eval(f, n);
  Nat b = e_eval(g, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nat_eq(a, b));
  }
}
BENCHMARK(BM_PrefixCodeEquality)->Arg(64)->Arg(512)->Arg(2048);

static void BM_StageWitness(benchmark::State& state) {
  auto root = make_periodic({2}, {0, 1});
  const auto& chain = family_chain();
  auto m0 = member_node(0, root);
  BigInt n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(least_witness(chain[0], m0, n % 64));
    ++n;
  }
}
BENCHMARK(BM_StageWitness);

static void BM_MemberValue(benchmark::State& state) {
  auto root = make_eventually_constant({3}, 1);
  auto m3 = member_node(3, root);
  BigInt n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(m3, n % 256));
    ++n;
  }
}
BENCHMARK(BM_MemberValue);

static void BM_TreeWalk(benchmark::State& state) {
  auto root = make_periodic({}, {0, 1});
  auto m3 = member_node(3, root);
  LazySeq prefix = fun_prefix(m3, state.range(0));
  TreePredicate pred = tree_from_stage(family_chain()[3]);
  for (auto _ : state) {
    TreeWalker walker(pred);
    for (const Nat& v : prefix) walker.push(v);
    benchmark::DoNotOptimize(walker.rejected());
  }
}
BENCHMARK(BM_TreeWalk)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
