#include <benchmark/benchmark.h>

#include "decoy/challenger.hpp"
#include "decoy/datagen.hpp"
#include "decoy/rng.hpp"

using namespace decoy;

namespace {

std::vector<Post> pool_of(int n) {
    ScenarioSpec spec;
    StreamPlan plan;
    plan.T = 1;
    plan.n_damaging = 0;
    plan.n_nondamaging = 0;
    plan.n_volunteered = n;
    plan.seed = 9;
    return build_stream(spec, plan)[0].volunteered_new;
}

std::vector<double> probs_for(size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> probs(n);
    for (auto& p : probs) p = 0.05 + 0.9 * rng.uniform();
    return probs;
}

}  // namespace

static void BM_D2Ascent(benchmark::State& state) {
    auto pool = pool_of(static_cast<int>(state.range(0)));
    auto probs = probs_for(pool.size(), 11);
    auto phi = init_params(2, {16, 16}, Role::ChallengerPhi, 3);
    TrainHyper hyper;
    hyper.epochs = 60;
    for (auto _ : state) {
        auto r = train_d2(phi, pool, probs, hyper, 7);
        benchmark::DoNotOptimize(r.final_value);
    }
}
BENCHMARK(BM_D2Ascent)->Arg(50)->Arg(200);

static void BM_BruteForceOptimum(benchmark::State& state) {
    auto probs = probs_for(static_cast<size_t>(state.range(0)), 13);
    for (auto _ : state) {
        auto r = brute_force_discrete_optimum(probs, 3);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_BruteForceOptimum)->Arg(12)->Arg(16)->Arg(20);

static void BM_RejectionSelect(benchmark::State& state) {
    ScenarioSpec spec;
    spec.scenario = Scenario::FullyOverlapping;
    auto pool = pool_of(600);
    for (auto _ : state) {
        auto picked = select_rejection(pool, 20, spec, 7.389, 21);
        benchmark::DoNotOptimize(picked.size());
    }
}
BENCHMARK(BM_RejectionSelect);

BENCHMARK_MAIN();
