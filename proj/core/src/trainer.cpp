#include "itrader/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "itrader/gae.hpp"

namespace itrader {

void validate_config(const PpoConfig& c) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (c.learning_rate <= 0.0) fail("learning_rate must be positive");
    if (c.minibatch_size < 1) fail("minibatch_size must be >= 1");
    if (c.batch_size < 1) fail("batch_size must be >= 1");
    if (c.num_actors < 1) fail("num_actors must be >= 1");
    if (static_cast<long long>(c.minibatch_size) >
        static_cast<long long>(c.num_actors) * c.batch_size)
        fail("minibatch_size must not exceed num_actors * batch_size");
    if (!(c.clip_eps > 0.0 && c.clip_eps < 1.0)) fail("clip_eps must lie in (0, 1)");
    if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) fail("gamma must lie in [0, 1]");
    if (!(c.gae_lambda >= 0.0 && c.gae_lambda <= 1.0)) fail("gae_lambda must lie in [0, 1]");
    if (c.value_coef < 0.0) fail("value_coef must be >= 0");
    if (c.commission_bp < 0.0) fail("commission_bp must be >= 0");
    if (c.inner_epochs < 0) fail("inner_epochs must be >= 0");
    if (c.early_stop_patience < 1) fail("early_stop_patience must be >= 1");
    if (c.max_epochs < 1) fail("max_epochs must be >= 1");
    if (c.entropy_coef < 0.0) fail("entropy_coef must be >= 0");
}

void save_ppo_config(const std::string& path, const PpoConfig& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[64];
    auto real = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "learning_rate=" << real(c.learning_rate) << "\n";
    out << "minibatch_size=" << c.minibatch_size << "\n";
    out << "batch_size=" << c.batch_size << "\n";
    out << "num_actors=" << c.num_actors << "\n";
    out << "gae_lambda=" << real(c.gae_lambda) << "\n";
    out << "value_coef=" << real(c.value_coef) << "\n";
    out << "gamma=" << real(c.gamma) << "\n";
    out << "commission_bp=" << real(c.commission_bp) << "\n";
    out << "clip_eps=" << real(c.clip_eps) << "\n";
    out << "inner_epochs=" << c.inner_epochs << "\n";
    out << "early_stop_patience=" << c.early_stop_patience << "\n";
    out << "max_epochs=" << c.max_epochs << "\n";
    out << "advantage_normalization=" << (c.advantage_normalization ? "true" : "false") << "\n";
    out << "entropy_coef=" << real(c.entropy_coef) << "\n";
    out << "seed=" << c.seed << "\n";
}

PpoConfig load_ppo_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PpoConfig c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            if (key == "learning_rate") c.learning_rate = std::stod(value);
            else if (key == "minibatch_size") c.minibatch_size = std::stoi(value);
            else if (key == "batch_size") c.batch_size = std::stoi(value);
            else if (key == "num_actors") c.num_actors = std::stoi(value);
            else if (key == "gae_lambda") c.gae_lambda = std::stod(value);
            else if (key == "value_coef") c.value_coef = std::stod(value);
            else if (key == "gamma") c.gamma = std::stod(value);
            else if (key == "commission_bp") c.commission_bp = std::stod(value);
            else if (key == "clip_eps") c.clip_eps = std::stod(value);
            else if (key == "inner_epochs") c.inner_epochs = std::stoi(value);
            else if (key == "early_stop_patience") c.early_stop_patience = std::stoi(value);
            else if (key == "max_epochs") c.max_epochs = std::stoi(value);
            else if (key == "advantage_normalization") c.advantage_normalization = value == "true" || value == "1";
            else if (key == "entropy_coef") c.entropy_coef = std::stod(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) + ": bad value '" +
                                     value + "' for " + key);
        }
    }
    return c;
}

UpdateStats ppo_update(PolicyParams& params, AdamState& adam, RolloutBuffer& buffer,
                       const PpoConfig& config, Rng& shuffle_rng) {
    const std::size_t n = buffer.size();
    if (n == 0) throw std::invalid_argument("ppo_update: empty buffer");
    if (buffer.advantages.size() != n || buffer.value_targets.size() != n)
        throw std::invalid_argument("ppo_update: advantages not computed");

    if (config.advantage_normalization) {
        double mean = 0.0;
        for (double a : buffer.advantages) mean += a;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double a : buffer.advantages) var += (a - mean) * (a - mean);
        var /= std::max<std::size_t>(n - 1, 1);
        const double sd = std::sqrt(var) + 1e-8;
        for (double& a : buffer.advantages) a = (a - mean) / sd;
    }

    UpdateStats stats;
    int minibatches = 0;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    PolicyParams grads;
    const std::size_t m = static_cast<std::size_t>(config.minibatch_size);
    for (int k = 0; k < config.inner_epochs; ++k) {
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);
        for (std::size_t start = 0; start < n; start += m) {
            const std::size_t end = std::min(start + m, n);
            SampleBatch batch;
            batch.obs.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t idx = order[i];
                batch.obs.push_back(buffer.obs[idx]);
                batch.action_index.push_back(buffer.action_index[idx]);
                batch.old_log_prob.push_back(buffer.log_probs[idx]);
                batch.advantage.push_back(buffer.advantages[idx]);
                batch.value_target.push_back(buffer.value_targets[idx]);
            }
            LossStats ls = loss_and_grad(params, batch, config.clip_eps, config.value_coef,
                                         config.entropy_coef, grads);
            adam_step(params.data(), grads.data(), adam);
            stats.mean_loss += ls.total;
            stats.clip_fraction += ls.clip_fraction;
            ++minibatches;
        }
    }
    if (minibatches > 0) {
        stats.mean_loss /= minibatches;
        stats.clip_fraction /= minibatches;
    }
    return stats;
}

bool EarlyStopTracker::record(double val_reward) {
    ++epoch_;
    if (!any_ || val_reward > best_) {
        any_ = true;
        best_ = val_reward;
        best_epoch_ = epoch_;
        streak_ = 0;
        return true;
    }
    ++streak_;
    return false;
}

double validation_reward(const PolicyParams& params, const std::vector<TradingDay>& days,
                         const CostModel& cost, const NormalizerConfig& norm_config,
                         const std::function<void(const CivilDate&)>& on_day) {
    Normalizer normalizer(norm_config);
    PolicyFn policy = [&params](const Observation& obs) {
        ForwardResult r = forward(params, obs);
        return PolicyOutput{r.dist.probs, r.value};
    };
    double total = 0.0;
    for (const TradingDay& day : days) {
        if (on_day) on_day(day.date);
        EpisodeResult ep = run_episode(day, normalizer, policy, ActionMode::kGreedy, cost);
        total += ep.total_reward;
    }
    return total;
}

TrainOutcome train_roll(const RollSplit& split, const PpoConfig& config, const TrainHooks& hooks,
                        bool parallel_actors) {
    validate_config(config);
    if (split.train_days.empty()) throw std::invalid_argument("train_roll: empty training set");
    if (split.val_days.empty()) throw std::invalid_argument("train_roll: empty validation set");

    const NormalizerConfig norm_config = normalizer_config_for_day(split.train_days.front());
    const CostModel cost{config.commission_bp};

    TrainOutcome outcome{TrainReport{}, PolicyParams(), AdamState(PolicyParams::kCount,
                                                                  AdamConfig{config.learning_rate})};
    PolicyParams params = PolicyParams::orthogonal_init(derive_seed(config.seed, 0x1717));
    AdamState adam(PolicyParams::kCount, AdamConfig{config.learning_rate});
    Rng update_rng(derive_seed(config.seed, 0x5EED));

    std::vector<Actor> actors;
    actors.reserve(config.num_actors);
    for (int k = 0; k < config.num_actors; ++k)
        actors.emplace_back(norm_config, derive_seed(config.seed, 0xAC70 + k));

    EarlyStopTracker stopper(config.early_stop_patience);
    int iteration = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        // Chronological consumption, days dealt round-robin across actors.
        for (int k = 0; k < config.num_actors; ++k) {
            actors[k].days.clear();
            actors[k].next_day = 0;
        }
        for (std::size_t d = 0; d < split.train_days.size(); ++d)
            actors[d % actors.size()].days.push_back(&split.train_days[d]);

        auto actors_exhausted = [&]() {
            for (const Actor& a : actors)
                if (a.next_day < a.days.size()) return false;
            return true;
        };

        while (!actors_exhausted()) {
            std::function<void(const CivilDate&)> on_day;
            if (hooks.on_day)
                on_day = [&](const CivilDate& d) { hooks.on_day(d, "train"); };
            RolloutBuffer buffer = collect_rollouts(params, actors, config.batch_size, cost,
                                                    parallel_actors, on_day);
            if (buffer.size() == 0) break;
            GaeResult gae = compute_gae(buffer.rewards, buffer.values, buffer.dones, config.gamma,
                                        config.gae_lambda);
            buffer.advantages = std::move(gae.advantages);
            buffer.value_targets = std::move(gae.value_targets);
            UpdateStats us = ppo_update(params, adam, buffer, config, update_rng);
            outcome.report.iterations.push_back(
                IterationStats{++iteration, epoch, us.mean_loss, us.clip_fraction});
        }

        std::function<void(const CivilDate&)> on_val_day;
        if (hooks.on_day)
            on_val_day = [&](const CivilDate& d) { hooks.on_day(d, "val"); };
        const double val = validation_reward(params, split.val_days, cost, norm_config, on_val_day);
        outcome.report.val_rewards.push_back(val);
        if (hooks.on_epoch) hooks.on_epoch(epoch, val);

        if (stopper.record(val)) {
            outcome.best_params = params;
            outcome.adam = adam;
        }
        outcome.report.stopping_epoch = epoch;
        if (stopper.should_stop()) break;
    }

    outcome.report.best_epoch = stopper.best_epoch();
    return outcome;
}

void write_train_log(const std::string& path, const TrainReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "iteration,epoch,mean_loss,clip_fraction,val_reward\n";
    char buf[128];
    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
        const IterationStats& it = report.iterations[i];
        const bool epoch_end = (i + 1 == report.iterations.size()) ||
                               (report.iterations[i + 1].epoch != it.epoch);
        out << it.iteration << "," << it.epoch << ",";
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", it.mean_loss, it.clip_fraction);
        out << buf << ",";
        if (epoch_end && it.epoch <= static_cast<int>(report.val_rewards.size())) {
            std::snprintf(buf, sizeof(buf), "%.17g", report.val_rewards[it.epoch - 1]);
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace itrader
