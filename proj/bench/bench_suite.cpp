#include <banditcsp/generators.hpp>
#include <banditcsp/suite.hpp>

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace banditcsp;

namespace {
    auto bench_instances() -> const std::vector<Instance> &
    {
        static const auto instances = [] {
            std::vector<Instance> out;
            for (std::uint64_t s = 1; s <= 6; ++s)
                out.push_back(gen_random_csp(RandomSpec{18, 6, 3, 86, 0.30, s}));
            out.push_back(gen_all_interval(8));
            out.push_back(gen_golomb(5, 11));
            return out;
        }();
        return instances;
    }

    auto bench_strategies() -> std::vector<StrategySpec>
    {
        return {StrategySpec::fixed(HeuristicKind::DdegDom), StrategySpec::fixed(HeuristicKind::WdegDom),
            StrategySpec::fixed(HeuristicKind::Impact), StrategySpec::fixed(HeuristicKind::Activity),
            StrategySpec::ucb1(), StrategySpec::thompson()};
    }

    auto BM_SuiteSerial(benchmark::State & state) -> void
    {
        const auto strategies = bench_strategies();
        SuiteConfig cfg;
        for (auto _ : state)
            benchmark::DoNotOptimize(run_suite_serial(bench_instances(), strategies, cfg));
        state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bench_instances().size() * strategies.size()));
    }

    auto BM_SuiteParallel(benchmark::State & state) -> void
    {
        const auto strategies = bench_strategies();
        SuiteConfig cfg;
        omp_set_num_threads(static_cast<int>(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(run_suite(bench_instances(), strategies, cfg));
        state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bench_instances().size() * strategies.size()));
        state.counters["threads"] = static_cast<double>(state.range(0));
    }
} // namespace

BENCHMARK(BM_SuiteSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SuiteParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
