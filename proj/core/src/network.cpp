#include "itrader/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace itrader {

namespace {

// Fills `w` (rows x cols, row-major) with a gain-scaled orthogonal matrix:
// Gaussian draws orthonormalized with modified Gram-Schmidt along the
// shorter dimension.
void orthogonal_fill(std::span<double> w, int rows, int cols, double gain, Rng& rng) {
    const int big = std::max(rows, cols);
    const int small = std::min(rows, cols);
    std::vector<double> q(static_cast<std::size_t>(big) * small);
    for (double& x : q) x = rng.normal();

    for (int j = 0; j < small; ++j) {
        for (int k = 0; k < j; ++k) {
            double dot = 0.0;
            for (int i = 0; i < big; ++i) dot += q[i * small + j] * q[i * small + k];
            for (int i = 0; i < big; ++i) q[i * small + j] -= dot * q[i * small + k];
        }
        double norm = 0.0;
        for (int i = 0; i < big; ++i) norm += q[i * small + j] * q[i * small + j];
        norm = std::sqrt(norm);
        for (int i = 0; i < big; ++i) q[i * small + j] /= norm;
    }

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double v = rows >= cols ? q[r * small + c] : q[c * small + r];
            w[r * cols + c] = gain * v;
        }
}

void dense(std::span<const double> w, std::span<const double> b, const double* x, int in, int out,
           double* y) {
    for (int j = 0; j < out; ++j) {
        double acc = b[j];
        const double* row = w.data() + static_cast<std::size_t>(j) * in;
        for (int k = 0; k < in; ++k) acc += row[k] * x[k];
        y[j] = acc;
    }
}

void softmax3(const std::array<double, 3>& logits, std::array<double, 3>& probs) {
    double mx = std::max({logits[0], logits[1], logits[2]});
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        probs[i] = std::exp(logits[i] - mx);
        sum += probs[i];
    }
    for (int i = 0; i < 3; ++i) probs[i] /= sum;
}

}  // namespace

PolicyParams PolicyParams::orthogonal_init(std::uint64_t seed) {
    PolicyParams p;
    Rng rng(seed);
    orthogonal_fill(p.w1(), kHidden1, kInputDim, 1.41, rng);
    orthogonal_fill(p.w2(), kHidden2, kHidden1, 1.41, rng);
    orthogonal_fill(p.wp(), kNumActions, kHidden2, 0.01, rng);
    orthogonal_fill(p.wv(), 1, kHidden2, 1.0, rng);
    return p;
}

ForwardTrace forward_trace(const PolicyParams& params, const Observation& obs) {
    for (double v : obs.values)
        if (!std::isfinite(v)) throw std::runtime_error("forward: non-finite observation entry");

    ForwardTrace t;
    dense(params.w1(), params.b1(), obs.values.data(), kInputDim, kHidden1, t.h1.data());
    for (double& v : t.h1) v = std::max(v, 0.0);
    dense(params.w2(), params.b2(), t.h1.data(), kHidden1, kHidden2, t.h2.data());
    for (double& v : t.h2) v = std::max(v, 0.0);
    dense(params.wp(), params.bp(), t.h2.data(), kHidden2, kNumActions, t.logits.data());
    softmax3(t.logits, t.probs);

    double value = params.bv()[0];
    auto wv = params.wv();
    for (int k = 0; k < kHidden2; ++k) value += wv[k] * t.h2[k];
    t.value = value;
    return t;
}

ForwardResult forward(const PolicyParams& params, const Observation& obs) {
    ForwardTrace t = forward_trace(params, obs);
    ForwardResult r;
    r.dist.probs = t.probs;
    r.value = t.value;
    return r;
}

LossStats loss_and_grad(const PolicyParams& params, const SampleBatch& batch, double clip_eps,
                        double value_coef, double entropy_coef, PolicyParams& grads) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("loss_and_grad: empty batch");
    if (batch.action_index.size() != n || batch.old_log_prob.size() != n ||
        batch.advantage.size() != n || batch.value_target.size() != n)
        throw std::invalid_argument("loss_and_grad: batch field lengths disagree");

    std::fill(grads.data().begin(), grads.data().end(), 0.0);
    auto gw1 = grads.w1();
    auto gb1 = grads.b1();
    auto gw2 = grads.w2();
    auto gb2 = grads.b2();
    auto gwp = grads.wp();
    auto gbp = grads.bp();
    auto gwv = grads.wv();
    auto gbv = grads.bv();

    LossStats stats;
    const double inv_n = 1.0 / static_cast<double>(n);

    for (std::size_t s = 0; s < n; ++s) {
        const ForwardTrace t = forward_trace(params, batch.obs[s]);
        const int a = batch.action_index[s];
        if (a < 0 || a >= kNumActions)
            throw std::invalid_argument("loss_and_grad: bad action index at sample " +
                                        std::to_string(s));

        const double log_prob = std::log(t.probs[a]);
        const double ratio = std::exp(log_prob - batch.old_log_prob[s]);
        const double adv = batch.advantage[s];
        if (!std::isfinite(ratio) || !std::isfinite(adv))
            throw std::runtime_error("loss_and_grad: non-finite ratio/advantage at sample " +
                                     std::to_string(s));

        const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
        const double surr = ratio * adv;
        const double surr_clipped = clipped * adv;
        const double clip_obj = std::min(surr, surr_clipped);

        const double verr = t.value - batch.value_target[s];

        double entropy = 0.0;
        for (int i = 0; i < kNumActions; ++i)
            if (t.probs[i] > 0.0) entropy -= t.probs[i] * std::log(t.probs[i]);

        stats.clip_term += clip_obj * inv_n;
        stats.value_term += verr * verr * inv_n;
        stats.entropy += entropy * inv_n;
        if (std::abs(ratio - 1.0) > clip_eps) stats.clip_fraction += inv_n;

        // d(loss)/d(ratio): the clipped branch has zero slope wherever it is
        // the strict minimum.
        const double dratio = (surr <= surr_clipped) ? -adv * inv_n : 0.0;

        std::array<double, kNumActions> glogits{};
        for (int j = 0; j < kNumActions; ++j) {
            double indicator = (j == a) ? 1.0 : 0.0;
            glogits[j] = dratio * ratio * (indicator - t.probs[j]);
        }
        if (entropy_coef != 0.0) {
            for (int j = 0; j < kNumActions; ++j) {
                double logp = t.probs[j] > 0.0 ? std::log(t.probs[j]) : 0.0;
                glogits[j] += entropy_coef * inv_n * t.probs[j] * (logp + entropy);
            }
        }
        const double gvalue = 2.0 * value_coef * verr * inv_n;

        // Heads into the shared trunk.
        std::array<double, kHidden2> gh2{};
        auto wp = params.wp();
        for (int j = 0; j < kNumActions; ++j) {
            gbp[j] += glogits[j];
            const std::size_t row = static_cast<std::size_t>(j) * kHidden2;
            for (int k = 0; k < kHidden2; ++k) {
                gwp[row + k] += glogits[j] * t.h2[k];
                gh2[k] += glogits[j] * wp[row + k];
            }
        }
        auto wv = params.wv();
        gbv[0] += gvalue;
        for (int k = 0; k < kHidden2; ++k) {
            gwv[k] += gvalue * t.h2[k];
            gh2[k] += gvalue * wv[k];
        }

        for (int k = 0; k < kHidden2; ++k)
            if (t.h2[k] <= 0.0) gh2[k] = 0.0;

        std::array<double, kHidden1> gh1{};
        auto w2 = params.w2();
        for (int j = 0; j < kHidden2; ++j) {
            if (gh2[j] == 0.0) continue;
            gb2[j] += gh2[j];
            const std::size_t row = static_cast<std::size_t>(j) * kHidden1;
            for (int k = 0; k < kHidden1; ++k) {
                gw2[row + k] += gh2[j] * t.h1[k];
                gh1[k] += gh2[j] * w2[row + k];
            }
        }

        for (int k = 0; k < kHidden1; ++k)
            if (t.h1[k] <= 0.0) gh1[k] = 0.0;

        const double* x = batch.obs[s].values.data();
        for (int j = 0; j < kHidden1; ++j) {
            if (gh1[j] == 0.0) continue;
            gb1[j] += gh1[j];
            const std::size_t row = static_cast<std::size_t>(j) * kInputDim;
            for (int k = 0; k < kInputDim; ++k) gw1[row + k] += gh1[j] * x[k];
        }
    }

    stats.total = -stats.clip_term + value_coef * stats.value_term - entropy_coef * stats.entropy;
    if (!std::isfinite(stats.total)) throw std::runtime_error("loss_and_grad: non-finite loss");
    return stats;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    const AdamConfig& c = state.config;
    ++state.step_count;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
}

// -------- checkpoint io --------------------------------------------------

namespace {

constexpr char kMagic[4] = {'I', 'T', 'C', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(kMagic, 4);
    write_u32(out, kFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const NamedTensor& t : tensors) {
        write_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_u32(out, static_cast<std::uint32_t>(t.shape.size()));
        std::size_t count = 1;
        for (std::size_t d : t.shape) {
            write_u64(out, d);
            count *= d;
        }
        if (count != t.values.size())
            throw std::runtime_error("checkpoint tensor '" + t.name + "': shape/value mismatch");
        out.write(reinterpret_cast<const char*>(t.values.data()),
                  static_cast<std::streamsize>(t.values.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<NamedTensor> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a checkpoint file");
    std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw std::runtime_error(path + ": unsupported checkpoint version " +
                                 std::to_string(version));
    std::uint32_t count = read_u32(in);
    std::vector<NamedTensor> tensors(count);
    for (NamedTensor& t : tensors) {
        std::uint32_t name_len = read_u32(in);
        t.name.resize(name_len);
        in.read(t.name.data(), name_len);
        std::uint32_t ndim = read_u32(in);
        t.shape.resize(ndim);
        std::size_t n = 1;
        for (std::uint32_t d = 0; d < ndim; ++d) {
            t.shape[d] = static_cast<std::size_t>(read_u64(in));
            n *= t.shape[d];
        }
        t.values.resize(n);
        in.read(reinterpret_cast<char*>(t.values.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!in) throw std::runtime_error(path + ": truncated checkpoint");
    }
    return tensors;
}

namespace {

NamedTensor slice_tensor(const PolicyParams& p, const char* name, std::size_t offset,
                         std::vector<std::size_t> shape) {
    NamedTensor t;
    t.name = name;
    t.shape = std::move(shape);
    std::size_t n = 1;
    for (std::size_t d : t.shape) n *= d;
    t.values.assign(p.data().begin() + offset, p.data().begin() + offset + n);
    return t;
}

}  // namespace

void save_policy_checkpoint(const std::string& path, const PolicyParams& params,
                            const AdamState* adam) {
    std::vector<NamedTensor> tensors;
    tensors.push_back(slice_tensor(params, "trunk.w1", PolicyParams::kW1, {kHidden1, kInputDim}));
    tensors.push_back(slice_tensor(params, "trunk.b1", PolicyParams::kB1, {kHidden1}));
    tensors.push_back(slice_tensor(params, "trunk.w2", PolicyParams::kW2, {kHidden2, kHidden1}));
    tensors.push_back(slice_tensor(params, "trunk.b2", PolicyParams::kB2, {kHidden2}));
    tensors.push_back(slice_tensor(params, "policy.w", PolicyParams::kWp, {kNumActions, kHidden2}));
    tensors.push_back(slice_tensor(params, "policy.b", PolicyParams::kBp, {kNumActions}));
    tensors.push_back(slice_tensor(params, "value.w", PolicyParams::kWv, {kHidden2}));
    tensors.push_back(slice_tensor(params, "value.b", PolicyParams::kBv, {1}));
    if (adam) {
        tensors.push_back(NamedTensor{"adam.m", {adam->m.size()}, adam->m});
        tensors.push_back(NamedTensor{"adam.v", {adam->v.size()}, adam->v});
        tensors.push_back(
            NamedTensor{"adam.step", {1}, {static_cast<double>(adam->step_count)}});
    }
    save_checkpoint(path, tensors);
}

PolicyParams load_policy_checkpoint(const std::string& path, AdamState* adam) {
    auto tensors = load_checkpoint(path);
    PolicyParams params;
    auto take = [&](const char* name, std::size_t offset, std::size_t n) {
        for (const NamedTensor& t : tensors) {
            if (t.name == name) {
                if (t.values.size() != n)
                    throw std::runtime_error(path + ": tensor '" + name + "' has wrong size");
                std::copy(t.values.begin(), t.values.end(), params.data().begin() + offset);
                return;
            }
        }
        throw std::runtime_error(path + ": missing tensor '" + std::string(name) + "'");
    };
    take("trunk.w1", PolicyParams::kW1, kHidden1 * kInputDim);
    take("trunk.b1", PolicyParams::kB1, kHidden1);
    take("trunk.w2", PolicyParams::kW2, kHidden2 * kHidden1);
    take("trunk.b2", PolicyParams::kB2, kHidden2);
    take("policy.w", PolicyParams::kWp, kNumActions * kHidden2);
    take("policy.b", PolicyParams::kBp, kNumActions);
    take("value.w", PolicyParams::kWv, kHidden2);
    take("value.b", PolicyParams::kBv, 1);
    if (adam) {
        for (const NamedTensor& t : tensors) {
            if (t.name == "adam.m") adam->m = t.values;
            if (t.name == "adam.v") adam->v = t.values;
            if (t.name == "adam.step")
                adam->step_count = static_cast<std::int64_t>(t.values.at(0));
        }
    }
    return params;
}

}  // namespace itrader
