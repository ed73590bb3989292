// Serial reference path versus OpenMP-parallel EA phases and repetitions.
#include <benchmark/benchmark.h>

#include "tbo/engine.hpp"
#include "tbo/presets.hpp"

namespace {

tbo::TboConfig bench_config(const std::string& objective, std::size_t dim, std::size_t steps) {
    tbo::TboConfig cfg = tbo::find_preset("high_diversity")->config;
    cfg.objective = objective;
    cfg.dimension = dim;
    cfg.max_steps = steps;
    cfg.repetitions = 4;
    return cfg;
}

void BM_Run(benchmark::State& state, tbo::ExecPolicy policy, std::string objective, std::size_t dim) {
    const auto cfg = bench_config(objective, dim, 500);
    for (auto _ : state) benchmark::DoNotOptimize(tbo::run_single(cfg, 0, policy));
}

void BM_Repetitions(benchmark::State& state, tbo::ExecPolicy policy) {
    const auto cfg = bench_config("rastrigin", 50, 300);
    for (auto _ : state) benchmark::DoNotOptimize(tbo::run_repetitions(cfg, tbo::Algorithm::tbo, policy));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Run, sphere50_serial, tbo::ExecPolicy::serial, "sphere", 50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, sphere50_parallel, tbo::ExecPolicy::parallel, "sphere", 50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, lj60_serial, tbo::ExecPolicy::serial, "lennard_jones", 60)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, lj60_parallel, tbo::ExecPolicy::parallel, "lennard_jones", 60)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Repetitions, serial, tbo::ExecPolicy::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Repetitions, parallel, tbo::ExecPolicy::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
