#include <benchmark/benchmark.h>

#include "decoy/config.hpp"
#include "decoy/engine.hpp"

using namespace decoy;

namespace {

GameConfig bench_config(ChallengerMode mode) {
    GameConfig c = preset_config("partial_overlap");
    c.T = 5;
    c.n_volunteered = 200;
    c.challenger_mode = mode;
    c.seed = 31;
    return c;
}

}  // namespace

static void BM_GameNoChallenger(benchmark::State& state) {
    auto config = bench_config(ChallengerMode::None);
    for (auto _ : state) {
        auto trace = run_game(config);
        benchmark::DoNotOptimize(trace.records.back().metrics.f_score);
    }
}
BENCHMARK(BM_GameNoChallenger);

static void BM_GameD2(benchmark::State& state) {
    auto config = bench_config(ChallengerMode::D2);
    for (auto _ : state) {
        auto trace = run_game(config);
        benchmark::DoNotOptimize(trace.records.back().metrics.f_score);
    }
}
BENCHMARK(BM_GameD2);

static void BM_EvaluateCumulative(benchmark::State& state) {
    auto config = bench_config(ChallengerMode::None);
    config.T = static_cast<int>(state.range(0));
    auto trace = run_game(config);
    auto adversary = make_adversary(config);
    adversary.params = trace.final_params;
    for (auto _ : state) {
        auto m = evaluate_cumulative(adversary, trace.ledgers, config.T, 5);
        benchmark::DoNotOptimize(m.f_score);
    }
}
BENCHMARK(BM_EvaluateCumulative)->Arg(5)->Arg(10);

BENCHMARK_MAIN();
