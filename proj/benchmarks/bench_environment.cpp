#include <benchmark/benchmark.h>

#include "itrader/environment.hpp"
#include "itrader/synthetic.hpp"

using namespace itrader;

namespace {

void BM_EpisodeRandomPolicy(benchmark::State& state) {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 1, .seed = 2});
    CostModel cost{0.08};
    Rng rng(7);
    PolicyFn policy = [](const Observation&) {
        return PolicyOutput{{0.25, 0.5, 0.25}, 0.0};
    };
    Normalizer norm(normalizer_config_for_day(days[0]));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_episode(days[0], norm, policy, ActionMode::kSample, cost, &rng));
    }
    state.SetItemsProcessed(state.iterations() * days[0].horizon());
}
BENCHMARK(BM_EpisodeRandomPolicy);

void BM_EnvStep(benchmark::State& state) {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 1, .seed = 3});
    CostModel cost{0.08};
    Normalizer norm(normalizer_config_for_day(days[0]));
    TradingEnv env(cost);
    env.reset(days[0], norm);
    int t = 0;
    for (auto _ : state) {
        if (env.done()) {
            state.PauseTiming();
            env.reset(days[0], norm);
            t = 0;
            state.ResumeTiming();
        }
        benchmark::DoNotOptimize(env.step((t++ % 3) - 1));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStep);

}  // namespace
