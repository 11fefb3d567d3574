#include <benchmark/benchmark.h>

#include "decoy/model.hpp"
#include "decoy/rng.hpp"

using namespace decoy;

namespace {

std::vector<Example> random_batch(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Example> batch;
    batch.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<double> x;
        for (int j = 0; j < d; ++j) x.push_back(rng.normal());
        batch.push_back({x, static_cast<int>(rng.uniform_int(2))});
    }
    return batch;
}

}  // namespace

static void BM_ForwardProb(benchmark::State& state) {
    auto params = init_params(2, {16, 16}, Role::AdversaryTheta, 1);
    auto batch = random_batch(256, 2, 2);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_prob(params, batch[i % batch.size()].x));
        ++i;
    }
}
BENCHMARK(BM_ForwardProb);

static void BM_NllGrad(benchmark::State& state) {
    auto params = init_params(2, {16, 16}, Role::AdversaryTheta, 1);
    auto batch = random_batch(static_cast<int>(state.range(0)), 2, 3);
    for (auto _ : state) {
        auto g = nll_grad(params, batch);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_NllGrad)->Arg(16)->Arg(64)->Arg(256);

static void BM_Train(benchmark::State& state) {
    auto params = init_params(2, {16, 16}, Role::AdversaryTheta, 1);
    auto batch = random_batch(40, 2, 4);
    TrainHyper hyper;
    hyper.epochs = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto r = train(params, batch, hyper, 5);
        benchmark::DoNotOptimize(r.final_loss);
    }
}
BENCHMARK(BM_Train)->Arg(10)->Arg(60);

BENCHMARK_MAIN();
