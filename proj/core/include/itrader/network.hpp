#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "itrader/environment.hpp"
#include "itrader/features.hpp"
#include "itrader/rng.hpp"

namespace itrader {

inline constexpr int kInputDim = kStateDim;  // 13
inline constexpr int kHidden1 = 128;
inline constexpr int kHidden2 = 64;
inline constexpr int kNumActions = 3;

// Shared-trunk actor-critic MLP: 13 -> 128 -> 64 (ReLU) with a 3-way
// softmax policy head and a scalar value head. Parameters live in one flat
// 64-bit vector; the named views below expose the row-major tensors.
class PolicyParams {
public:
    static constexpr std::size_t kW1 = 0;
    static constexpr std::size_t kB1 = kW1 + kHidden1 * kInputDim;
    static constexpr std::size_t kW2 = kB1 + kHidden1;
    static constexpr std::size_t kB2 = kW2 + kHidden2 * kHidden1;
    static constexpr std::size_t kWp = kB2 + kHidden2;
    static constexpr std::size_t kBp = kWp + kNumActions * kHidden2;
    static constexpr std::size_t kWv = kBp + kNumActions;
    static constexpr std::size_t kBv = kWv + kHidden2;
    static constexpr std::size_t kCount = kBv + 1;

    PolicyParams() : data_(kCount, 0.0) {}

    // Orthogonal trunk (gain 1.41), near-zero policy head (gain 0.01), unit
    // value head, zero biases.
    static PolicyParams orthogonal_init(std::uint64_t seed);

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    std::span<double> w1() { return {data_.data() + kW1, kHidden1 * kInputDim}; }
    std::span<double> b1() { return {data_.data() + kB1, kHidden1}; }
    std::span<double> w2() { return {data_.data() + kW2, kHidden2 * kHidden1}; }
    std::span<double> b2() { return {data_.data() + kB2, kHidden2}; }
    std::span<double> wp() { return {data_.data() + kWp, kNumActions * kHidden2}; }
    std::span<double> bp() { return {data_.data() + kBp, kNumActions}; }
    std::span<double> wv() { return {data_.data() + kWv, kHidden2}; }
    std::span<double> bv() { return {data_.data() + kBv, 1}; }

    std::span<const double> w1() const { return {data_.data() + kW1, kHidden1 * kInputDim}; }
    std::span<const double> b1() const { return {data_.data() + kB1, kHidden1}; }
    std::span<const double> w2() const { return {data_.data() + kW2, kHidden2 * kHidden1}; }
    std::span<const double> b2() const { return {data_.data() + kB2, kHidden2}; }
    std::span<const double> wp() const { return {data_.data() + kWp, kNumActions * kHidden2}; }
    std::span<const double> bp() const { return {data_.data() + kBp, kNumActions}; }
    std::span<const double> wv() const { return {data_.data() + kWv, kHidden2}; }
    std::span<const double> bv() const { return {data_.data() + kBv, 1}; }

private:
    std::vector<double> data_;
};

struct ActionDistribution {
    std::array<double, kNumActions> probs{};  // actions -1, 0, +1
};

struct ForwardResult {
    ActionDistribution dist;
    double value = 0.0;
};

// Deterministic forward pass; throws on non-finite input.
ForwardResult forward(const PolicyParams& params, const Observation& obs);

// Forward pass keeping the activations needed for backprop.
struct ForwardTrace {
    std::array<double, kHidden1> h1{};
    std::array<double, kHidden2> h2{};
    std::array<double, kNumActions> logits{};
    std::array<double, kNumActions> probs{};
    double value = 0.0;
};
ForwardTrace forward_trace(const PolicyParams& params, const Observation& obs);

// One transition prepared for a PPO update.
struct SampleBatch {
    std::vector<Observation> obs;
    std::vector<int> action_index;  // 0 -> -1, 1 -> 0, 2 -> +1
    std::vector<double> old_log_prob;
    std::vector<double> advantage;
    std::vector<double> value_target;

    std::size_t size() const { return obs.size(); }
};

struct LossStats {
    double total = 0.0;          // mean of -(clip term) + c * value term - beta * entropy
    double clip_term = 0.0;      // mean clipped surrogate
    double value_term = 0.0;     // mean squared value error
    double entropy = 0.0;        // mean policy entropy
    double clip_fraction = 0.0;  // share of samples with |ratio - 1| > eps
};

// Mean PPO loss over the batch and its exact analytic gradient, written
// into `grads` (overwritten, same layout as the parameters). Non-finite
// intermediates are reported with the offending sample index.
LossStats loss_and_grad(const PolicyParams& params, const SampleBatch& batch, double clip_eps,
                        double value_coef, double entropy_coef, PolicyParams& grads);

struct AdamConfig {
    double learning_rate = 0.0001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step_count = 0;

    explicit AdamState(std::size_t n = PolicyParams::kCount, AdamConfig cfg = {})
        : config(cfg), m(n, 0.0), v(n, 0.0) {}
};

// Standard bias-corrected Adam update, in place. Throws on shape mismatch.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state);

// -------- checkpoint io --------------------------------------------------

struct NamedTensor {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> values;  // row-major
};

// Binary tensor-list file: magic "ITCK", format version, then each tensor
// as (name, shape, raw little-endian doubles). Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

void save_policy_checkpoint(const std::string& path, const PolicyParams& params,
                            const AdamState* adam = nullptr);
PolicyParams load_policy_checkpoint(const std::string& path, AdamState* adam = nullptr);

}  // namespace itrader
