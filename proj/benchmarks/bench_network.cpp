#include <benchmark/benchmark.h>

#include "itrader/gae.hpp"
#include "itrader/network.hpp"
#include "itrader/rng.hpp"

using namespace itrader;

namespace {

void BM_Forward(benchmark::State& state) {
    PolicyParams params = PolicyParams::orthogonal_init(1);
    Rng rng(2);
    Observation obs;
    for (double& v : obs.values) v = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(forward(params, obs));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Forward);

void BM_LossAndGrad64(benchmark::State& state) {
    PolicyParams params = PolicyParams::orthogonal_init(3);
    Rng rng(4);
    SampleBatch batch;
    for (int i = 0; i < 64; ++i) {
        Observation obs;
        for (double& v : obs.values) v = rng.normal();
        ForwardResult fr = forward(params, obs);
        int idx = static_cast<int>(rng.below(3));
        batch.obs.push_back(obs);
        batch.action_index.push_back(idx);
        batch.old_log_prob.push_back(std::log(fr.dist.probs[idx]));
        batch.advantage.push_back(rng.normal());
        batch.value_target.push_back(rng.normal());
    }
    PolicyParams grads;
    for (auto _ : state)
        benchmark::DoNotOptimize(loss_and_grad(params, batch, 0.2, 0.5, 0.0, grads));
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_LossAndGrad64);

void BM_AdamStep(benchmark::State& state) {
    PolicyParams params = PolicyParams::orthogonal_init(5);
    std::vector<double> grads(PolicyParams::kCount, 1e-4);
    AdamState adam(PolicyParams::kCount, AdamConfig{1e-4});
    for (auto _ : state) {
        adam_step(params.data(), grads, adam);
        benchmark::DoNotOptimize(params.data().data());
    }
    state.SetItemsProcessed(state.iterations() * PolicyParams::kCount);
}
BENCHMARK(BM_AdamStep);

void BM_Gae360(benchmark::State& state) {
    Rng rng(6);
    std::vector<double> rewards(360), values(360);
    std::vector<std::uint8_t> done(360, 0);
    done.back() = 1;
    for (int i = 0; i < 360; ++i) {
        rewards[i] = rng.normal() * 1e-3;
        values[i] = rng.normal() * 1e-3;
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_gae(rewards, values, done, 1.0, 0.95));
    state.SetItemsProcessed(state.iterations() * 360);
}
BENCHMARK(BM_Gae360);

}  // namespace
