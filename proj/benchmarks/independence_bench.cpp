#include <benchmark/benchmark.h>

#include <etlab/independence.hpp>

namespace {

void BM_ExhaustiveVerify(benchmark::State& state) {
    const auto M = static_cast<std::uint64_t>(state.range(0));
    const auto m = static_cast<unsigned>(state.range(1));
    std::uint64_t sums = 0;
    for (auto _ : state) {
        const auto r = etlab::exhaustive_verify(M, m);
        sums = r.sums_enumerated;
        benchmark::DoNotOptimize(sums);
    }
    state.counters["sums"] = static_cast<double>(sums);
}
BENCHMARK(BM_ExhaustiveVerify)->Args({10, 3})->Args({20, 3})->Args({10, 4})->Unit(benchmark::kMillisecond);

void BM_DetectRelation(benchmark::State& state) {
    const std::vector<etlab::SignedTerm> terms{{1, 8}, {-1, 2}, {-1, 18}, {1, 50}, {1, 3}, {-1, 12}};
    for (auto _ : state) benchmark::DoNotOptimize(etlab::detect_relation(terms).is_zero);
}
BENCHMARK(BM_DetectRelation);

}  // namespace
