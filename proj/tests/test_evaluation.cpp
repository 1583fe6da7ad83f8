#include <doctest.h>

#include <cmath>

#include "itrader/ablation.hpp"
#include "itrader/baselines.hpp"
#include "itrader/metrics.hpp"
#include "itrader/synthetic.hpp"
#include "itrader/trade_stats.hpp"
#include "oracles.hpp"

using namespace itrader;

namespace {

// A hand-built day of constant prices (all bars o=h=l=c=price).
TradingDay flat_day(double price, CivilDate date = {2020, 1, 6}) {
    SessionSpec session;
    TradingDay day;
    day.date = date;
    day.decision_begin = session.warmup_bars;
    day.decision_end = session.warmup_bars + session.horizon();
    std::int64_t base = days_from_civil(date) * 86400;
    for (int k = 0; k < session.bars_per_day(); ++k) {
        std::int64_t ts = base + static_cast<std::int64_t>(session.bar_minute(k)) * 60;
        day.bars.push_back(Bar{ts, price, price, price, price, 1000.0});
    }
    return day;
}

EpisodeTrace trace_of(const TradingDay& day, const std::vector<int>& actions) {
    EpisodeTrace t;
    t.date = day.date;
    t.actions = actions;
    return t;
}

std::vector<std::vector<int>> random_action_days(std::size_t n_days, int horizon,
                                                 std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> out(n_days);
    for (auto& actions : out) {
        for (int t = 0; t < horizon - 1; ++t)
            actions.push_back(static_cast<int>(rng.below(3)) - 1);
        actions.push_back(0);  // forced liquidation
    }
    return out;
}

// Geometric price grid across days: every bar's price multiplies by
// `ratio` per bar, ending at roughly start * growth.
std::vector<TradingDay> geometric_days(int n_days, double start, double total_growth) {
    SessionSpec session;
    std::vector<TradingDay> days;
    CivilDate date{2020, 1, 6};
    const int total_bars = n_days * session.bars_per_day();
    const double ratio = std::pow(total_growth, 1.0 / total_bars);
    double price = start;
    for (int d = 0; d < n_days; ++d) {
        TradingDay day;
        day.date = date;
        day.decision_begin = session.warmup_bars;
        day.decision_end = session.warmup_bars + session.horizon();
        std::int64_t base = days_from_civil(date) * 86400;
        for (int k = 0; k < session.bars_per_day(); ++k) {
            std::int64_t ts = base + static_cast<std::int64_t>(session.bar_minute(k)) * 60;
            double next = price * ratio;
            day.bars.push_back(Bar{ts, price, std::max(price, next), std::min(price, next), next,
                                   1000.0});
            price = next;
        }
        days.push_back(std::move(day));
        date = next_weekday(date);
    }
    return days;
}

}  // namespace

TEST_CASE("flat strategy returns are identically zero") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 2, .seed = 1});
    std::vector<EpisodeTrace> traces;
    for (const auto& d : days) traces.push_back(trace_of(d, std::vector<int>(360, 0)));
    ReturnSeries s = strategy_returns(days, traces, 0.08);
    for (double r : s.minute_returns) CHECK(r == 0.0);
    for (double r : s.daily_returns) CHECK(r == 0.0);
    CHECK(s.minute_returns.size() == 720);
}

TEST_CASE("held long with rising opens matches the Eq-arithmetic example") {
    TradingDay day = flat_day(100.0);
    // Make one open-to-open interval rise 1%: opens at decision steps.
    const int j = day.decision_begin + 1 + 5;
    for (std::size_t k = j + 1; k < day.bars.size(); ++k) {
        day.bars[k].open = 101.0;
        day.bars[k].high = std::max(day.bars[k].high, 101.0);
        day.bars[k].close = std::max(day.bars[k].close, 101.0);
        day.bars[k].low = std::min(day.bars[k].low, 101.0);
    }
    std::vector<int> actions(360, 1);
    actions.back() = 0;
    ReturnSeries s = strategy_returns({day}, {trace_of(day, actions)}, 0.0);
    CHECK(s.minute_returns[5] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("daily compounding matches the minute product") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 2});
    auto actions = random_action_days(days.size(), 360, 55);
    std::vector<EpisodeTrace> traces;
    for (std::size_t d = 0; d < days.size(); ++d)
        traces.push_back(trace_of(days[d], actions[d]));
    ReturnSeries s = strategy_returns(days, traces, 0.08);
    for (std::size_t d = 0; d < s.dates.size(); ++d) {
        std::size_t begin = s.day_offsets[d];
        std::size_t end = d + 1 < s.day_offsets.size() ? s.day_offsets[d + 1]
                                                       : s.minute_returns.size();
        double growth = 1.0;
        for (std::size_t i = begin; i < end; ++i) growth *= 1.0 + s.minute_returns[i];
        CHECK(s.daily_returns[d] == doctest::Approx(growth - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("compounded returns match the cash-ledger oracle") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 4, .seed = 3, .daily_vol = 0.012});
    auto actions = random_action_days(days.size(), 360, 77);
    std::vector<EpisodeTrace> traces;
    for (std::size_t d = 0; d < days.size(); ++d)
        traces.push_back(trace_of(days[d], actions[d]));

    ReturnSeries s = strategy_returns(days, traces, 0.08);
    auto curve = cumulative_curve(s.minute_returns);
    double ledger = oracles::ledger_terminal_wealth(days, actions, 0.08);
    CHECK(curve.back() == doctest::Approx(ledger - 1.0).epsilon(1e-10));
}

TEST_CASE("cumulative curve basics") {
    CHECK(cumulative_curve({0.0, 0.0, 0.0}) == std::vector<double>{0.0, 0.0, 0.0});
    auto curve = cumulative_curve({0.01, 0.01});
    CHECK(curve[0] == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(curve[1] == doctest::Approx(0.0201).epsilon(1e-15));
}

TEST_CASE("metric arithmetic matches the hand-computed cases") {
    SUBCASE("sharpe from mean 0.001 and std 0.01") {
        std::vector<double> daily{0.001, 0.011, -0.009};
        auto ms = oracles::two_pass_mean_std(daily);
        REQUIRE(ms.mean == doctest::Approx(0.001).epsilon(1e-15));
        REQUIRE(ms.sample_std == doctest::Approx(0.01).epsilon(1e-12));
        MetricsReport m = compute_metrics(daily);
        CHECK(m.ann_mean == doctest::Approx(0.252).epsilon(1e-12));
        CHECK(m.ann_std == doctest::Approx(0.158745078663875).epsilon(1e-9));
        REQUIRE(m.sharpe.has_value());
        CHECK(*m.sharpe == doctest::Approx(1.5874507866387544).epsilon(1e-9));
    }

    SUBCASE("drawdown of the 1 -> 1.2 -> 0.9 -> 1.1 path") {
        std::vector<double> daily{0.2, -0.25, 1.1 / 0.9 - 1.0};
        CHECK(max_drawdown_from_returns(daily) == doctest::Approx(0.25).epsilon(1e-12));
        MetricsReport m = compute_metrics(daily);
        CHECK(m.max_drawdown == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("degenerate variance yields undefined sharpe") {
        std::vector<double> daily{0.01, 0.01, 0.01};
        MetricsReport m = compute_metrics(daily);
        CHECK(!m.sharpe.has_value());
        CHECK(!m.sortino.has_value());  // no negative days
        CHECK(!m.calmar.has_value());   // no drawdown
        CHECK(m.pct_positive == 100.0);
    }
}

TEST_CASE("metric identities hold where denominators are positive") {
    Rng rng(4);
    std::vector<double> daily;
    for (int i = 0; i < 100; ++i) daily.push_back(0.002 * rng.normal());
    MetricsReport m = compute_metrics(daily);
    REQUIRE(m.sharpe.has_value());
    CHECK(*m.sharpe * m.ann_std == doctest::Approx(m.ann_mean).epsilon(1e-10));
    REQUIRE(m.calmar.has_value());
    CHECK(*m.calmar * m.max_drawdown == doctest::Approx(m.ann_mean).epsilon(1e-10));
    REQUIRE(m.sortino.has_value());
    CHECK(*m.sortino * m.downside_dev == doctest::Approx(m.ann_mean).epsilon(1e-10));
}

TEST_CASE("buy and hold doubles, sell and hold halves") {
    auto days = geometric_days(10, 100.0, 2.0 * 100.0 / 100.0);
    // End-of-period close is exactly twice the first open by construction.
    ReturnSeries bh = benchmark_returns(days, BenchmarkKind::kBuyHold, 0.0);
    auto curve = cumulative_curve(bh.minute_returns);
    CHECK(curve.back() == doctest::Approx(1.0).epsilon(1e-9));

    ReturnSeries sh = benchmark_returns(days, BenchmarkKind::kSellHold, 0.0);
    auto sh_curve = cumulative_curve(sh.minute_returns);
    CHECK(sh_curve.back() == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("buy and hold pays commission exactly once at entry") {
    auto days = geometric_days(3, 100.0, 1.1);
    ReturnSeries with = benchmark_returns(days, BenchmarkKind::kBuyHold, 0.08);
    ReturnSeries without = benchmark_returns(days, BenchmarkKind::kBuyHold, 0.0);
    REQUIRE(with.minute_returns.size() == without.minute_returns.size());
    CHECK(without.minute_returns[0] - with.minute_returns[0] ==
          doctest::Approx(0.08e-4).epsilon(1e-12));
    for (std::size_t i = 1; i < with.minute_returns.size(); ++i)
        CHECK(with.minute_returns[i] == without.minute_returns[i]);
}

TEST_CASE("benchmark daily returns compound along their day segments") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 5, .seed = 5});
    for (auto kind : {BenchmarkKind::kBuyHold, BenchmarkKind::kSellHold}) {
        ReturnSeries s = benchmark_returns(days, kind, 0.08);
        REQUIRE(s.daily_returns.size() == days.size());
        for (std::size_t d = 0; d < s.dates.size(); ++d) {
            std::size_t begin = s.day_offsets[d];
            std::size_t end = d + 1 < s.day_offsets.size() ? s.day_offsets[d + 1]
                                                           : s.minute_returns.size();
            double growth = 1.0;
            for (std::size_t i = begin; i < end; ++i) growth *= 1.0 + s.minute_returns[i];
            CHECK(s.daily_returns[d] == doctest::Approx(growth - 1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("momentum takes the sign of the trailing month") {
    SUBCASE("positive trailing return goes long") {
        auto history = geometric_days(23, 100.0, 1.02);  // rising month
        auto days = geometric_days(2, 102.0, 1.0);
        ReturnSeries s = benchmark_returns(days, BenchmarkKind::kMomentum, 0.0, history);
        // Long position: the entry interval return matches buy & hold.
        ReturnSeries bh = benchmark_returns(days, BenchmarkKind::kBuyHold, 0.0);
        CHECK(s.minute_returns[0] == bh.minute_returns[0]);
    }

    SUBCASE("exactly zero trailing return goes short") {
        auto history = geometric_days(23, 100.0, 1.0);  // perfectly flat
        auto days = geometric_days(2, 100.0, 1.0);
        ReturnSeries s = benchmark_returns(days, BenchmarkKind::kMomentum, 0.08, history);
        ReturnSeries sh = benchmark_returns(days, BenchmarkKind::kSellHold, 0.08);
        CHECK(s.minute_returns[0] == sh.minute_returns[0]);
    }

    SUBCASE("insufficient history throws") {
        auto history = geometric_days(10, 100.0, 1.0);
        auto days = geometric_days(2, 100.0, 1.0);
        CHECK_THROWS_AS(benchmark_returns(days, BenchmarkKind::kMomentum, 0.0, history),
                        std::invalid_argument);
    }
}

TEST_CASE("portfolio identities") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 2, .seed = 6});
    auto actions = random_action_days(days.size(), 360, 10);
    std::vector<EpisodeTrace> traces;
    for (std::size_t d = 0; d < days.size(); ++d)
        traces.push_back(trace_of(days[d], actions[d]));
    ReturnSeries a = strategy_returns(days, traces, 0.08);

    SUBCASE("identical components average to themselves") {
        ReturnSeries p = portfolio({a, a, a});
        for (std::size_t i = 0; i < a.minute_returns.size(); ++i)
            CHECK(p.minute_returns[i] == doctest::Approx(a.minute_returns[i]).epsilon(1e-15));
    }

    SUBCASE("mirror components cancel") {
        ReturnSeries neg = a;
        for (double& r : neg.minute_returns) r = -r;
        ReturnSeries p = portfolio({a, neg});
        for (double r : p.minute_returns) CHECK(r == doctest::Approx(0.0).epsilon(1e-18));
    }

    SUBCASE("three components match the arithmetic mean") {
        Rng rng(7);
        ReturnSeries b = a, c = a;
        for (double& r : b.minute_returns) r = 0.001 * rng.normal();
        for (double& r : c.minute_returns) r = 0.001 * rng.normal();
        ReturnSeries p = portfolio({a, b, c});
        for (std::size_t i = 0; i < a.minute_returns.size(); ++i) {
            double mean =
                (a.minute_returns[i] + b.minute_returns[i] + c.minute_returns[i]) / 3.0;
            CHECK(p.minute_returns[i] == doctest::Approx(mean).epsilon(1e-15));
        }
    }

    SUBCASE("portfolio of equal-weight portfolios flattens") {
        Rng rng(8);
        ReturnSeries b = a, c = a, d = a;
        for (double& r : b.minute_returns) r = 0.001 * rng.normal();
        for (double& r : c.minute_returns) r = 0.001 * rng.normal();
        for (double& r : d.minute_returns) r = 0.001 * rng.normal();
        ReturnSeries nested = portfolio({portfolio({a, b}), portfolio({c, d})});
        ReturnSeries flat = portfolio({a, b, c, d});
        for (std::size_t i = 0; i < flat.minute_returns.size(); ++i)
            CHECK(nested.minute_returns[i] ==
                  doctest::Approx(flat.minute_returns[i]).epsilon(1e-12));
    }

    SUBCASE("misaligned series are rejected") {
        ReturnSeries shifted = a;
        for (auto& t : shifted.timestamps) t += 60;
        CHECK_THROWS_AS(portfolio({a, shifted}), std::invalid_argument);
    }
}

TEST_CASE("trade statistics") {
    auto make_trade = [](double ret, int duration) {
        TradeRecord t;
        t.side = 1;
        t.entry_step = 0;
        t.exit_step = duration;
        t.duration = duration;
        t.net_return = ret;
        return t;
    };

    SUBCASE("symmetric pair") {
        TradeStats s = trade_stats({make_trade(0.01, 5), make_trade(-0.01, 3)});
        CHECK(*s.win_rate == doctest::Approx(50.0).epsilon(1e-12));
        CHECK(*s.pos_neg_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*s.expected_return == doctest::Approx(0.0).epsilon(1e-15));
    }

    SUBCASE("single winner") {
        TradeStats s = trade_stats({make_trade(0.005, 7)});
        CHECK(*s.win_rate == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(*s.mean_duration == doctest::Approx(7.0).epsilon(1e-12));
        CHECK(!s.mean_negative.has_value());
        CHECK(!s.pos_neg_ratio.has_value());
    }

    SUBCASE("empty list leaves markers unset") {
        TradeStats s = trade_stats({});
        CHECK(s.n_trades == 0);
        CHECK(!s.win_rate.has_value());
        CHECK(!s.expected_return.has_value());
    }

    SUBCASE("a thousand trades match the tally oracle") {
        Rng rng(9);
        std::vector<TradeRecord> trades;
        for (int i = 0; i < 1000; ++i)
            trades.push_back(make_trade(0.002 * rng.normal(), 1 + static_cast<int>(rng.below(30))));
        TradeStats s = trade_stats(trades);
        auto tally = oracles::tally_trades(trades);
        CHECK(*s.win_rate ==
              doctest::Approx(100.0 * tally.wins / 1000.0).epsilon(1e-12));
        CHECK(*s.mean_positive == doctest::Approx(tally.pos_sum / tally.wins).epsilon(1e-12));
        CHECK(*s.mean_negative == doctest::Approx(tally.neg_sum / tally.losses).epsilon(1e-12));
        CHECK(*s.mean_duration == doctest::Approx(tally.duration_sum / 1000.0).epsilon(1e-12));
        double expect = (tally.pos_sum + tally.neg_sum) / 1000.0;
        CHECK(*s.expected_return == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("intraday profiles") {
    auto trade_at = [](int step, int duration) {
        TradeRecord t;
        t.side = 1;
        t.entry_step = step;
        t.exit_step = step + duration;
        t.duration = duration;
        t.net_return = 0.001;
        return t;
    };

    SUBCASE("all trades in the first bucket") {
        std::vector<TradeRecord> trades{trade_at(0, 3), trade_at(5, 2), trade_at(14, 1)};
        IntradayProfile p = intraday_profiles(trades, 360, 15);
        CHECK(p.pct_initiated[0] == doctest::Approx(100.0).epsilon(1e-12));
        for (std::size_t b = 1; b < p.pct_initiated.size(); ++b) {
            CHECK(p.pct_initiated[b] == 0.0);
            CHECK(!p.mean_duration[b].has_value());
        }
        CHECK(*p.mean_duration[0] == doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("uniform entries stay near uniform over ten thousand trades") {
        Rng rng(10);
        std::vector<TradeRecord> trades;
        for (int i = 0; i < 10000; ++i)
            trades.push_back(trade_at(static_cast<int>(rng.below(360)), 5));
        IntradayProfile p = intraday_profiles(trades, 360, 15);
        double uniform = 100.0 / 24.0;
        double total = 0.0;
        for (double pct : p.pct_initiated) {
            CHECK(std::abs(pct - uniform) < 1.5);
            total += pct;
        }
        CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
    }
}

namespace {

// A hand-built policy gated purely on the normalized time-left entry: long
// over the (11:00, 12:00] drift window, short over (14:00, 15:00], flat
// elsewhere. The four technical-indicator inputs get small live weights
// that never move a decision, so zero-out ablation must attribute all the
// Sharpe to time-left.
PolicyParams time_left_window_policy() {
    PolicyParams p;
    const int tl = 9;  // normalized time-left column
    // Ramp detectors in h1: x - a and x - b on TLn (long box), same on -TLn
    // (short box). Window bounds in normalized time-left units.
    const double long_a = 0.506, long_b = 0.841;
    const double short_a = 0.161, short_b = 0.496;
    p.w1()[0 * kInputDim + tl] = 1.0;
    p.b1()[0] = -long_a;
    p.w1()[1 * kInputDim + tl] = 1.0;
    p.b1()[1] = -long_b;
    p.w1()[2 * kInputDim + tl] = -1.0;
    p.b1()[2] = -short_a;
    p.w1()[3 * kInputDim + tl] = -1.0;
    p.b1()[3] = -short_b;
    // Keep the indicator inputs alive without letting them matter.
    for (int row = 0; row < 4; ++row)
        for (int col = 5; col <= 8; ++col) p.w1()[row * kInputDim + col] = 1e-4;
    // Boxes: relu(ramp_a - 1000 * ramp_b) switches off past the far edge.
    p.w2()[0 * kHidden1 + 0] = 1.0;
    p.w2()[0 * kHidden1 + 1] = -1000.0;
    p.w2()[1 * kHidden1 + 2] = 1.0;
    p.w2()[1 * kHidden1 + 3] = -1000.0;
    // Heads: strong logits inside a box, a flat bias otherwise.
    p.wp()[2 * kHidden2 + 0] = 300.0;  // long
    p.wp()[0 * kHidden2 + 1] = 300.0;  // short
    p.bp()[1] = 1.0;                   // flat
    return p;
}

}  // namespace

TEST_CASE("zero-out ablation attributes a time-gated policy to time-left") {
    SyntheticConfig cfg;
    cfg.n_days = 30;
    cfg.seed = 77;
    cfg.daily_vol = 0.004;
    cfg.planted_pattern = PlantedPattern::kTimeOfDayDrift;
    cfg.pattern_strength = 5e-4;
    auto days = generate_synthetic(cfg);

    PolicyParams params = time_left_window_policy();
    AssetEvalInput asset{"synthetic", {&params}, {&days}, 0.08};
    auto results = feature_importance({asset});
    REQUIRE(results.size() == kStateDim);

    double tl_delta = 0.0;
    double max_other = -1e300;
    for (const AblationResult& r : results) {
        if (r.feature == std::string("time_left")) {
            tl_delta = r.mean_sharpe_delta;
        } else if (r.feature == std::string("rsi") || r.feature == std::string("adx") ||
                   r.feature == std::string("ultosc") || r.feature == std::string("willr")) {
            max_other = std::max(max_other, r.mean_sharpe_delta);
            // The indicators never move a decision for this policy.
            CHECK(r.mean_sharpe_delta == 0.0);
        }
    }
    CHECK(tl_delta > 1.0);
    CHECK(tl_delta > max_other);

    // Sanity: the policy itself harvests the planted pattern.
    auto traces = evaluate_policy(params, days, CostModel{0.08});
    ReturnSeries series = strategy_returns(days, traces, 0.08);
    MetricsReport m = compute_metrics(series.daily_returns);
    CHECK(m.ann_mean > 1.0);
}

TEST_CASE("feature importance behaves on degenerate policies") {
    auto days = generate_synthetic(SyntheticConfig{.n_days = 3, .seed = 11});

    SUBCASE("a dead input has exactly zero importance") {
        PolicyParams params = PolicyParams::orthogonal_init(3);
        // Sever feature 7 (ULTOSC) from the trunk.
        for (int j = 0; j < kHidden1; ++j) params.w1()[j * kInputDim + 7] = 0.0;
        AssetEvalInput asset{"synthetic", {&params}, {&days}, 0.08};
        auto results = feature_importance({asset});
        REQUIRE(results.size() == kStateDim);
        CHECK(results[7].feature == std::string("ultosc"));
        CHECK(results[7].mean_sharpe_delta == 0.0);
    }

    SUBCASE("repeated runs are identical") {
        PolicyParams params = PolicyParams::orthogonal_init(4);
        AssetEvalInput asset{"synthetic", {&params}, {&days}, 0.08};
        auto a = feature_importance({asset});
        auto b = feature_importance({asset});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean_sharpe_delta == b[i].mean_sharpe_delta);
            CHECK(a[i].per_asset_sharpe == b[i].per_asset_sharpe);
        }
    }

    SUBCASE("masking everything reduces the policy to constant input") {
        PolicyParams params = PolicyParams::orthogonal_init(5);
        std::array<bool, kStateDim> mask;
        mask.fill(true);
        auto traces = evaluate_policy(params, days, CostModel{0.08}, mask);

        Observation zero;
        ForwardResult fr = forward(params, zero);
        int constant_action = greedy_action(fr.dist.probs);
        for (const EpisodeTrace& trace : traces) {
            for (std::size_t t = 0; t + 1 < trace.actions.size(); ++t)
                CHECK(trace.actions[t] == constant_action);
            CHECK(trace.actions.back() == 0);
        }
    }
}
