#include <doctest.h>

#include <cmath>
#include <set>

#include "itrader/gae.hpp"
#include "itrader/market_data.hpp"
#include "itrader/synthetic.hpp"
#include "itrader/trainer.hpp"
#include "oracles.hpp"

using namespace itrader;

namespace {

std::vector<Actor> make_actors(int n, std::uint64_t seed, const std::vector<TradingDay>& days) {
    std::vector<Actor> actors;
    NormalizerConfig cfg = normalizer_config_for_day(days.front());
    for (int k = 0; k < n; ++k) actors.emplace_back(cfg, derive_seed(seed, k));
    for (std::size_t d = 0; d < days.size(); ++d)
        actors[d % actors.size()].days.push_back(&days[d]);
    return actors;
}

bool buffers_equal(const RolloutBuffer& a, const RolloutBuffer& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.action_index[i] != b.action_index[i]) return false;
        if (a.log_probs[i] != b.log_probs[i]) return false;
        if (a.values[i] != b.values[i]) return false;
        if (a.rewards[i] != b.rewards[i]) return false;
        if (a.dones[i] != b.dones[i]) return false;
        for (int k = 0; k < kStateDim; ++k)
            if (a.obs[i].values[k] != b.obs[i].values[k]) return false;
    }
    return true;
}

RollSplit tiny_split(std::uint64_t seed, int train_days = 9, int val_days = 3) {
    auto days = generate_synthetic(SyntheticConfig{
        .n_days = train_days + val_days, .seed = seed, .daily_vol = 0.005});
    RollSplit split;
    split.train_days.assign(days.begin(), days.begin() + train_days);
    split.val_days.assign(days.begin() + train_days, days.end());
    return split;
}

}  // namespace

TEST_CASE("gae hand example") {
    GaeResult g = compute_gae({1.0, 1.0}, {0.5, 0.5}, {0, 1}, 1.0, 0.95);
    CHECK(g.advantages[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.advantages[0] == doctest::Approx(1.475).epsilon(1e-15));
    CHECK(g.value_targets[0] == doctest::Approx(1.975).epsilon(1e-15));
    CHECK(g.value_targets[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gae limits") {
    Rng rng(1);
    std::vector<double> rewards, values;
    std::vector<std::uint8_t> done(32, 0);
    done.back() = 1;
    for (int i = 0; i < 32; ++i) {
        rewards.push_back(rng.normal());
        values.push_back(rng.normal());
    }

    SUBCASE("lambda = 1, gamma = 1 is Monte Carlo") {
        GaeResult g = compute_gae(rewards, values, done, 1.0, 1.0);
        for (std::size_t t = 0; t < rewards.size(); ++t) {
            double tail = 0.0;
            for (std::size_t k = t; k < rewards.size(); ++k) tail += rewards[k];
            CHECK(g.advantages[t] == doctest::Approx(tail - values[t]).epsilon(1e-12));
        }
    }

    SUBCASE("lambda = 0 is the one-step TD residual") {
        GaeResult g = compute_gae(rewards, values, done, 1.0, 0.0);
        for (std::size_t t = 0; t < rewards.size(); ++t) {
            double next = t + 1 < rewards.size() ? values[t + 1] : 0.0;
            if (done[t]) next = 0.0;
            CHECK(g.advantages[t] == doctest::Approx(rewards[t] + next - values[t]).epsilon(1e-12));
        }
    }
}

TEST_CASE("gae matches direct evaluation with episode boundaries") {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(64);
        std::vector<double> rewards(n), values(n);
        std::vector<std::uint8_t> done(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            rewards[i] = rng.normal();
            values[i] = rng.normal();
            done[i] = rng.uniform() < 0.1 ? 1 : 0;
        }
        done[n - 1] = 1;
        const double gamma = trial % 2 ? 1.0 : 0.97;
        const double lambda = 0.95;
        GaeResult g = compute_gae(rewards, values, done, gamma, lambda);
        auto direct = oracles::gae_direct(rewards, values, done, gamma, lambda);
        for (std::size_t t = 0; t < n; ++t)
            CHECK(g.advantages[t] == doctest::Approx(direct[t]).epsilon(1e-12));
    }
}

TEST_CASE("gae rejects mismatched lengths") {
    CHECK_THROWS_AS(compute_gae({1.0}, {0.5, 0.5}, {1}, 1.0, 0.95), std::invalid_argument);
}

TEST_CASE("advantages never cross episode boundaries") {
    // Two concatenated episodes must reproduce their isolated computations.
    Rng rng(3);
    std::vector<double> r1(20), v1(20), r2(30), v2(30);
    for (auto* v : {&r1, &v1, &r2, &v2})
        for (double& x : *v) x = rng.normal();
    std::vector<std::uint8_t> d1(20, 0), d2(30, 0);
    d1.back() = 1;
    d2.back() = 1;

    std::vector<double> rewards = r1, values = v1;
    rewards.insert(rewards.end(), r2.begin(), r2.end());
    values.insert(values.end(), v2.begin(), v2.end());
    std::vector<std::uint8_t> done = d1;
    done.insert(done.end(), d2.begin(), d2.end());

    GaeResult joint = compute_gae(rewards, values, done, 1.0, 0.95);
    GaeResult a = compute_gae(r1, v1, d1, 1.0, 0.95);
    GaeResult b = compute_gae(r2, v2, d2, 1.0, 0.95);
    for (std::size_t t = 0; t < 20; ++t)
        CHECK(joint.advantages[t] == doctest::Approx(a.advantages[t]).epsilon(1e-15));
    for (std::size_t t = 0; t < 30; ++t)
        CHECK(joint.advantages[20 + t] == doctest::Approx(b.advantages[t]).epsilon(1e-15));
}

TEST_CASE("collection meets the batch quota across whole episodes") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 6, .seed = 4});
    PolicyParams params = PolicyParams::orthogonal_init(1);
    auto actors = make_actors(3, 77, days);
    RolloutBuffer buffer = collect_rollouts(params, actors, 832, CostModel{0.08});
    CHECK(buffer.size() >= 832);
    int episodes = 0;
    for (std::uint8_t d : buffer.dones) episodes += d;
    CHECK(episodes >= 3);
    CHECK(buffer.size() == static_cast<std::size_t>(episodes) * 360);
}

TEST_CASE("collection is deterministic and scheduling independent") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 6, .seed = 5});
    PolicyParams params = PolicyParams::orthogonal_init(2);

    auto actors1 = make_actors(3, 99, days);
    auto actors2 = make_actors(3, 99, days);
    RolloutBuffer serial = collect_rollouts(params, actors1, 832, CostModel{0.08}, false);
    RolloutBuffer parallel = collect_rollouts(params, actors2, 832, CostModel{0.08}, true);
    CHECK(buffers_equal(serial, parallel));

    auto actors3 = make_actors(1, 42, days);
    auto actors4 = make_actors(1, 42, days);
    RolloutBuffer a = collect_rollouts(params, actors3, 360, CostModel{0.08});
    RolloutBuffer b = collect_rollouts(params, actors4, 360, CostModel{0.08});
    CHECK(buffers_equal(a, b));
}

TEST_CASE("zero inner epochs leave parameters untouched") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 6});
    PolicyParams params = PolicyParams::orthogonal_init(3);
    PolicyParams before = params;
    auto actors = make_actors(3, 11, days);
    RolloutBuffer buffer = collect_rollouts(params, actors, 832, CostModel{0.08});
    GaeResult gae = compute_gae(buffer.rewards, buffer.values, buffer.dones, 1.0, 0.95);
    buffer.advantages = gae.advantages;
    buffer.value_targets = gae.value_targets;

    PpoConfig config;
    config.inner_epochs = 0;
    AdamState adam(PolicyParams::kCount, AdamConfig{config.learning_rate});
    Rng rng(1);
    ppo_update(params, adam, buffer, config, rng);
    CHECK(params.data() == before.data());
}

TEST_CASE("first minibatch direction equals the unclipped policy gradient") {
    // Fresh rollouts have ratio exactly one, so the clipped surrogate and
    // the plain surrogate share their gradient.
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 7});
    PolicyParams params = PolicyParams::orthogonal_init(4);
    auto actors = make_actors(1, 21, days);
    RolloutBuffer buffer = collect_rollouts(params, actors, 64, CostModel{0.08});
    GaeResult gae = compute_gae(buffer.rewards, buffer.values, buffer.dones, 1.0, 0.95);

    SampleBatch batch;
    for (std::size_t i = 0; i < 64; ++i) {
        batch.obs.push_back(buffer.obs[i]);
        batch.action_index.push_back(buffer.action_index[i]);
        batch.old_log_prob.push_back(buffer.log_probs[i]);
        batch.advantage.push_back(gae.advantages[i]);
        batch.value_target.push_back(gae.value_targets[i]);
    }
    PolicyParams clipped_grads;
    loss_and_grad(params, batch, 0.2, 0.5, 0.0, clipped_grads);
    // Unclipped surrogate with a clip band too wide to bind.
    PolicyParams wide_grads;
    loss_and_grad(params, batch, 0.999, 0.5, 0.0, wide_grads);
    for (std::size_t i = 0; i < PolicyParams::kCount; ++i)
        CHECK(clipped_grads.data()[i] == doctest::Approx(wide_grads.data()[i]).epsilon(1e-12));
}

TEST_CASE("mean ratio stays near one after a default update round") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 8});
    PolicyParams params = PolicyParams::orthogonal_init(5);
    auto actors = make_actors(3, 31, days);
    RolloutBuffer buffer = collect_rollouts(params, actors, 832, CostModel{0.08});
    GaeResult gae = compute_gae(buffer.rewards, buffer.values, buffer.dones, 1.0, 0.95);
    buffer.advantages = gae.advantages;
    buffer.value_targets = gae.value_targets;

    PpoConfig config;
    AdamState adam(PolicyParams::kCount, AdamConfig{config.learning_rate});
    Rng rng(2);
    RolloutBuffer copy = buffer;
    ppo_update(params, adam, copy, config, rng);

    double mean_ratio = 0.0;
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        ForwardResult fr = forward(params, buffer.obs[i]);
        mean_ratio +=
            std::exp(std::log(fr.dist.probs[buffer.action_index[i]]) - buffer.log_probs[i]);
    }
    mean_ratio /= static_cast<double>(buffer.size());
    CHECK(mean_ratio > 1.0 - 2 * config.clip_eps);
    CHECK(mean_ratio < 1.0 + 2 * config.clip_eps);
}

TEST_CASE("early stopping follows the patience rule") {
    // Validation rewards [1, 2, 2, 2, 2, 2, 2] with patience 5: stop after
    // epoch 7, keep the epoch-2 checkpoint.
    EarlyStopTracker tracker(5);
    std::vector<double> vals{1, 2, 2, 2, 2, 2, 2};
    int stopped_at = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        tracker.record(vals[i]);
        if (tracker.should_stop()) {
            stopped_at = static_cast<int>(i) + 1;
            break;
        }
    }
    CHECK(stopped_at == 7);
    CHECK(tracker.best_epoch() == 2);

    // Monotone improvement never triggers the patience.
    EarlyStopTracker improving(5);
    for (int i = 0; i < 50; ++i) {
        improving.record(static_cast<double>(i));
        CHECK(!improving.should_stop());
    }
    CHECK(improving.best_epoch() == 50);
}

TEST_CASE("train_roll runs, stops within bounds and is reproducible") {
    RollSplit split = tiny_split(9);
    PpoConfig config;
    config.max_epochs = 2;
    config.batch_size = 256;
    config.num_actors = 2;
    config.seed = 17;

    TrainOutcome a = train_roll(split, config);
    CHECK(a.report.stopping_epoch <= config.max_epochs);
    CHECK(a.report.val_rewards.size() == static_cast<std::size_t>(a.report.stopping_epoch));
    CHECK(a.report.best_epoch >= 1);
    CHECK(!a.report.iterations.empty());

    TrainOutcome b = train_roll(split, config);
    CHECK(a.best_params.data() == b.best_params.data());
    CHECK(a.report.val_rewards == b.report.val_rewards);

    // The returned checkpoint corresponds to the best recorded validation.
    double best = a.report.val_rewards[0];
    for (double v : a.report.val_rewards) best = std::max(best, v);
    CHECK(a.report.val_rewards[a.report.best_epoch - 1] == best);
}

TEST_CASE("train_roll rejects empty splits") {
    RollSplit split = tiny_split(10);
    PpoConfig config;
    RollSplit no_train = split;
    no_train.train_days.clear();
    CHECK_THROWS_AS(train_roll(no_train, config), std::invalid_argument);
    RollSplit no_val = split;
    no_val.val_days.clear();
    CHECK_THROWS_AS(train_roll(no_val, config), std::invalid_argument);
}

TEST_CASE("training touches only train and validation days") {
    RollSplit split = tiny_split(11);
    auto test_days = generate_synthetic(SyntheticConfig{.n_days = 4, .seed = 999});

    std::set<std::string> allowed;
    for (const TradingDay& d : split.train_days) allowed.insert(format_date(d.date));
    for (const TradingDay& d : split.val_days) allowed.insert(format_date(d.date));

    PpoConfig config;
    config.max_epochs = 1;
    config.batch_size = 256;
    config.num_actors = 2;

    TrainHooks hooks;
    std::set<std::string> seen;
    hooks.on_day = [&](const CivilDate& date, const char*) { seen.insert(format_date(date)); };
    train_roll(split, config, hooks);

    for (const std::string& date : seen) CHECK(allowed.count(date) == 1);
    CHECK(seen.size() == allowed.size());
}

TEST_CASE("validation reward sums greedy log rewards") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 12});
    PolicyParams params;  // zero network: uniform policy, greedy tie-break flat
    double val = validation_reward(params, days, CostModel{0.08},
                                   normalizer_config_for_day(days[0]));
    CHECK(val == 0.0);  // all-flat tie-break earns exactly zero
}

TEST_CASE("config validation and round trip") {
    PpoConfig config;
    validate_config(config);

    SUBCASE("table defaults") {
        CHECK(config.learning_rate == 0.0001);
        CHECK(config.minibatch_size == 64);
        CHECK(config.batch_size == 832);
        CHECK(config.num_actors == 3);
        CHECK(config.gae_lambda == 0.95);
        CHECK(config.value_coef == 0.5);
        CHECK(config.gamma == 1.0);
        CHECK(config.commission_bp == 0.08);
        CHECK(config.early_stop_patience == 5);
    }

    SUBCASE("invalid fields throw") {
        PpoConfig bad = config;
        bad.clip_eps = 1.5;
        CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
        bad = config;
        bad.gamma = -0.1;
        CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
        bad = config;
        bad.minibatch_size = 10000;
        bad.num_actors = 1;
        bad.batch_size = 100;
        CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    }

    SUBCASE("key=value round trip") {
        PpoConfig c;
        c.learning_rate = 0.00025;
        c.batch_size = 512;
        c.advantage_normalization = false;
        c.entropy_coef = 0.01;
        c.seed = 987654321;
        save_ppo_config("/tmp/itrader_cfg.txt", c);
        PpoConfig loaded = load_ppo_config("/tmp/itrader_cfg.txt");
        CHECK(loaded.learning_rate == c.learning_rate);
        CHECK(loaded.batch_size == c.batch_size);
        CHECK(loaded.advantage_normalization == c.advantage_normalization);
        CHECK(loaded.entropy_coef == c.entropy_coef);
        CHECK(loaded.seed == c.seed);
        CHECK(loaded.minibatch_size == c.minibatch_size);
    }
}
