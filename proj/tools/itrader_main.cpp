// itrader: synthesize data, train the intraday PPO agent over walk-forward
// rolls, and evaluate it against the passive benchmarks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itrader/ablation.hpp"
#include "itrader/baselines.hpp"
#include "itrader/manifest.hpp"
#include "itrader/market_data.hpp"
#include "itrader/metrics.hpp"
#include "itrader/reports.hpp"
#include "itrader/synthetic.hpp"
#include "itrader/trade_stats.hpp"
#include "itrader/trainer.hpp"

namespace fs = std::filesystem;
using namespace itrader;

namespace {

std::string real_str(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string default_out_dir() {
    const char* env = std::getenv("ITRADER_OUT_DIR");
    return env ? env : "out";
}

bool parallel_actors_enabled() {
    const char* env = std::getenv("ITRADER_THREADS");
    if (!env) return true;
    return std::atoi(env) > 1;
}

int parse_session_minute(const std::string& hhmm) {
    if (hhmm.size() != 5 || hhmm[2] != ':')
        throw std::runtime_error("session time not in HH:MM form: '" + hhmm + "'");
    int h = std::stoi(hhmm.substr(0, 2));
    int m = std::stoi(hhmm.substr(3, 2));
    if (h < 0 || h > 23 || m < 0 || m > 59)
        throw std::runtime_error("session time out of range: '" + hhmm + "'");
    return h * 60 + m;
}

struct SplitParams {
    int train_months = 12;
    int test_months = 4;
    int val_months = 1;
};

struct DataParams {
    std::string session_open = "09:30";
    std::string session_close = "17:00";
    int utc_offset_min = 0;
    double min_daily_volume = 1000.0;

    SessionSpec session() const {
        SessionSpec s;
        s.open_minute = parse_session_minute(session_open);
        s.close_minute = parse_session_minute(session_close);
        s.utc_offset_minutes = utc_offset_min;
        return s;
    }
};

void config_into_map(const PpoConfig& c, std::map<std::string, std::string>& m) {
    m["learning_rate"] = real_str(c.learning_rate);
    m["minibatch_size"] = std::to_string(c.minibatch_size);
    m["batch_size"] = std::to_string(c.batch_size);
    m["num_actors"] = std::to_string(c.num_actors);
    m["gae_lambda"] = real_str(c.gae_lambda);
    m["value_coef"] = real_str(c.value_coef);
    m["gamma"] = real_str(c.gamma);
    m["commission_bp"] = real_str(c.commission_bp);
    m["clip_eps"] = real_str(c.clip_eps);
    m["inner_epochs"] = std::to_string(c.inner_epochs);
    m["early_stop_patience"] = std::to_string(c.early_stop_patience);
    m["max_epochs"] = std::to_string(c.max_epochs);
    m["advantage_normalization"] = c.advantage_normalization ? "true" : "false";
    m["entropy_coef"] = real_str(c.entropy_coef);
    m["seed"] = std::to_string(c.seed);
}

PpoConfig config_from_map(const std::map<std::string, std::string>& m) {
    PpoConfig c;
    c.learning_rate = std::stod(m.at("learning_rate"));
    c.minibatch_size = std::stoi(m.at("minibatch_size"));
    c.batch_size = std::stoi(m.at("batch_size"));
    c.num_actors = std::stoi(m.at("num_actors"));
    c.gae_lambda = std::stod(m.at("gae_lambda"));
    c.value_coef = std::stod(m.at("value_coef"));
    c.gamma = std::stod(m.at("gamma"));
    c.commission_bp = std::stod(m.at("commission_bp"));
    c.clip_eps = std::stod(m.at("clip_eps"));
    c.inner_epochs = std::stoi(m.at("inner_epochs"));
    c.early_stop_patience = std::stoi(m.at("early_stop_patience"));
    c.max_epochs = std::stoi(m.at("max_epochs"));
    c.advantage_normalization = m.at("advantage_normalization") == "true";
    c.entropy_coef = std::stod(m.at("entropy_coef"));
    c.seed = std::stoull(m.at("seed"));
    return c;
}

// ---------------------------------------------------------------- synth --

struct SynthArgs {
    int days = 250;
    std::uint64_t seed = 1;
    double base_price = 100.0;
    double daily_vol = 0.01;
    std::string vol_shape = "flat";
    std::string pattern = "none";
    double strength = 0.0;
    std::string start_date = "2012-01-02";
    std::string name = "synth";
    std::string out = default_out_dir();
};

int cmd_synth(const SynthArgs& args) {
    SyntheticConfig cfg;
    cfg.n_days = args.days;
    cfg.seed = args.seed;
    cfg.base_price = args.base_price;
    cfg.daily_vol = args.daily_vol;
    cfg.intraday_vol_shape = vol_shape_from_string(args.vol_shape);
    cfg.planted_pattern = pattern_from_string(args.pattern);
    cfg.pattern_strength = args.strength;
    cfg.start_date = parse_date(args.start_date);

    fs::create_directories(args.out);
    auto days = generate_synthetic(cfg);
    const std::string csv_name = args.name + ".csv";
    const std::string csv_path = (fs::path(args.out) / csv_name).string();
    write_csv(csv_path, flatten_days(days));

    RunManifest manifest;
    manifest.command = "synth";
    manifest.seed = cfg.seed;
    manifest.config["n_days"] = std::to_string(cfg.n_days);
    manifest.config["base_price"] = real_str(cfg.base_price);
    manifest.config["daily_vol"] = real_str(cfg.daily_vol);
    manifest.config["vol_shape"] = to_string(cfg.intraday_vol_shape);
    manifest.config["pattern"] = to_string(cfg.planted_pattern);
    manifest.config["pattern_strength"] = real_str(cfg.pattern_strength);
    manifest.config["start_date"] = format_date(cfg.start_date);
    manifest.config["name"] = args.name;
    manifest.artifacts.push_back(csv_name);
    manifest.inputs[csv_name] = file_fingerprint(csv_path);
    save_manifest((fs::path(args.out) / (args.name + ".manifest.json")).string(), manifest);

    std::cout << "wrote " << csv_path << " (" << days.size() << " days)\n";
    return 0;
}

// ---------------------------------------------------------------- train --

struct TrainArgs {
    std::string data;
    std::string out = default_out_dir();
    std::string config_file;
    std::string asset_name;
    std::string asset_class;
    DataParams data_params;
    SplitParams split;
    bool progress = false;
};

int cmd_train(const TrainArgs& args, const PpoConfig& config) {
    validate_config(config);
    const SessionSpec session = args.data_params.session();

    auto bars = load_csv(args.data);
    auto cleaned = clean_and_segment(bars, session, args.data_params.min_daily_volume);
    for (const std::string& w : cleaned.warnings) std::cerr << "warning: " << w << "\n";
    if (cleaned.days.empty()) throw std::runtime_error("no usable trading days after cleaning");

    auto splits = rolling_splits(cleaned.days, args.split.train_months, args.split.test_months,
                                 args.split.val_months);
    if (splits.rolls.empty())
        throw std::runtime_error("insufficient history: " + splits.diagnostic);

    fs::create_directories(args.out);
    const std::string asset =
        args.asset_name.empty() ? fs::path(args.data).stem().string() : args.asset_name;

    RunManifest manifest;
    manifest.command = "train";
    manifest.seed = config.seed;
    config_into_map(config, manifest.config);
    manifest.config["asset_name"] = asset;
    manifest.config["asset_class"] = args.asset_class;
    manifest.config["data"] = args.data;
    manifest.config["session_open"] = args.data_params.session_open;
    manifest.config["session_close"] = args.data_params.session_close;
    manifest.config["utc_offset_min"] = std::to_string(args.data_params.utc_offset_min);
    manifest.config["min_daily_volume"] = real_str(args.data_params.min_daily_volume);
    manifest.config["train_months"] = std::to_string(args.split.train_months);
    manifest.config["test_months"] = std::to_string(args.split.test_months);
    manifest.config["val_months"] = std::to_string(args.split.val_months);
    manifest.inputs[args.data] = file_fingerprint(args.data);

    save_ppo_config((fs::path(args.out) / "ppo_config.txt").string(), config);
    manifest.artifacts.push_back("ppo_config.txt");

    const bool parallel = parallel_actors_enabled();
    for (std::size_t r = 0; r < splits.rolls.size(); ++r) {
        char roll_name[32];
        std::snprintf(roll_name, sizeof(roll_name), "roll_%03zu", r);
        fs::path roll_dir = fs::path(args.out) / "rolls" / roll_name;
        fs::create_directories(roll_dir);

        PpoConfig roll_config = config;
        roll_config.seed = derive_seed(config.seed, 0x0711 + r);

        TrainHooks hooks;
        if (args.progress) {
            hooks.on_epoch = [&](int epoch, double val) {
                std::cout << roll_name << " epoch " << epoch << " val " << val << "\n";
            };
        }
        TrainOutcome outcome = train_roll(splits.rolls[r], roll_config, hooks, parallel);

        const std::string ckpt = (roll_dir / "checkpoint.bin").string();
        save_policy_checkpoint(ckpt, outcome.best_params, &outcome.adam);
        write_train_log((roll_dir / "train_log.csv").string(), outcome.report);

        nlohmann::json report;
        report["val_rewards"] = outcome.report.val_rewards;
        report["stopping_epoch"] = outcome.report.stopping_epoch;
        report["best_epoch"] = outcome.report.best_epoch;
        report["checkpoint"] = "checkpoint.bin";
        std::ofstream((roll_dir / "report.json").string()) << report.dump(2) << "\n";

        manifest.artifacts.push_back(std::string("rolls/") + roll_name + "/checkpoint.bin");
        manifest.artifacts.push_back(std::string("rolls/") + roll_name + "/train_log.csv");
        manifest.artifacts.push_back(std::string("rolls/") + roll_name + "/report.json");
        if (args.progress)
            std::cout << roll_name << " done: best epoch " << outcome.report.best_epoch << "/"
                      << outcome.report.stopping_epoch << "\n";
    }

    save_manifest((fs::path(args.out) / "manifest.json").string(), manifest);
    std::cout << "trained " << splits.rolls.size() << " roll(s) into " << args.out << "\n";
    return 0;
}

// ------------------------------------------------------------- evaluate --

struct AssetEvaluation {
    std::string name;
    std::string asset_class;
    double commission_bp = 0.08;
    int horizon = 360;
    std::vector<TradingDay> test_days;  // concatenated across rolls
    std::vector<std::vector<TradingDay>> roll_days;
    std::vector<PolicyParams> roll_params;
    std::vector<TradeRecord> trades;
    ReturnSeries drl;
    ReturnSeries buy_hold;
    ReturnSeries sell_hold;
    ReturnSeries momentum;
};

AssetEvaluation evaluate_run_dir(const std::string& run_dir) {
    RunManifest manifest = load_manifest((fs::path(run_dir) / "manifest.json").string());
    if (manifest.command != "train")
        throw std::runtime_error(run_dir + ": manifest is not from a train run");
    if (manifest.tool_version != kToolVersion)
        throw std::runtime_error(run_dir + ": checkpoints were written by tool version " +
                                 manifest.tool_version);

    AssetEvaluation eval;
    eval.name = manifest.config.at("asset_name");
    eval.asset_class = manifest.config.at("asset_class");
    PpoConfig config = config_from_map(manifest.config);
    eval.commission_bp = config.commission_bp;

    DataParams data_params;
    data_params.session_open = manifest.config.at("session_open");
    data_params.session_close = manifest.config.at("session_close");
    data_params.utc_offset_min = std::stoi(manifest.config.at("utc_offset_min"));
    data_params.min_daily_volume = std::stod(manifest.config.at("min_daily_volume"));
    const SessionSpec session = data_params.session();

    const std::string data_path = manifest.config.at("data");
    const std::string fingerprint = file_fingerprint(data_path);
    if (fingerprint != manifest.inputs.at(data_path))
        throw std::runtime_error(data_path + ": content changed since training (fingerprint " +
                                 fingerprint + " != " + manifest.inputs.at(data_path) + ")");

    auto bars = load_csv(data_path);
    auto cleaned = clean_and_segment(bars, session, data_params.min_daily_volume);
    auto splits = rolling_splits(cleaned.days, std::stoi(manifest.config.at("train_months")),
                                 std::stoi(manifest.config.at("test_months")),
                                 std::stoi(manifest.config.at("val_months")));

    std::vector<EpisodeTrace> all_traces;
    for (std::size_t r = 0; r < splits.rolls.size(); ++r) {
        char roll_name[32];
        std::snprintf(roll_name, sizeof(roll_name), "roll_%03zu", r);
        fs::path ckpt = fs::path(run_dir) / "rolls" / roll_name / "checkpoint.bin";
        if (!fs::exists(ckpt)) throw std::runtime_error("missing checkpoint " + ckpt.string());
        PolicyParams params = load_policy_checkpoint(ckpt.string());

        const auto& days = splits.rolls[r].test_days;
        auto traces = evaluate_policy(params, days, CostModel{eval.commission_bp});
        for (const EpisodeTrace& t : traces)
            eval.trades.insert(eval.trades.end(), t.trades.begin(), t.trades.end());
        all_traces.insert(all_traces.end(), traces.begin(), traces.end());
        eval.test_days.insert(eval.test_days.end(), days.begin(), days.end());
        eval.roll_days.push_back(days);
        eval.roll_params.push_back(std::move(params));
    }
    if (eval.test_days.empty()) throw std::runtime_error(run_dir + ": no test days to evaluate");
    eval.horizon = eval.test_days.front().horizon();

    eval.drl = strategy_returns(eval.test_days, all_traces, eval.commission_bp);
    eval.buy_hold = benchmark_returns(eval.test_days, BenchmarkKind::kBuyHold, eval.commission_bp);
    eval.sell_hold =
        benchmark_returns(eval.test_days, BenchmarkKind::kSellHold, eval.commission_bp);

    // Momentum history: the cleaned days preceding the first test day.
    std::vector<TradingDay> history;
    for (const TradingDay& d : cleaned.days)
        if (d.date < eval.test_days.front().date) history.push_back(d);
    eval.momentum =
        benchmark_returns(eval.test_days, BenchmarkKind::kMomentum, eval.commission_bp, history);
    return eval;
}

void write_asset_reports(const fs::path& dir, const AssetEvaluation& eval,
                         std::vector<std::string>& artifacts, const std::string& prefix) {
    fs::create_directories(dir);
    auto add = [&](const std::string& name) { artifacts.push_back(prefix + name); };

    std::vector<std::pair<std::string, MetricsReport>> metric_rows = {
        {"drl", compute_metrics(eval.drl.daily_returns)},
        {"buy_hold", compute_metrics(eval.buy_hold.daily_returns)},
        {"sell_hold", compute_metrics(eval.sell_hold.daily_returns)},
        {"momentum", compute_metrics(eval.momentum.daily_returns)},
    };
    write_metrics_csv((dir / "metrics.csv").string(), metric_rows);
    write_metrics_json((dir / "metrics.json").string(), metric_rows);
    add("metrics.csv");
    add("metrics.json");

    const std::vector<std::pair<std::string, const ReturnSeries*>> curves = {
        {"drl", &eval.drl},
        {"buy_hold", &eval.buy_hold},
        {"sell_hold", &eval.sell_hold},
        {"momentum", &eval.momentum},
    };
    for (const auto& [label, series] : curves) {
        write_pnl_csv((dir / ("pnl_" + label + ".csv")).string(), *series);
        add("pnl_" + label + ".csv");
    }
    write_pnl_svg((dir / "pnl.svg").string(), eval.name + " cumulative returns", curves);
    add("pnl.svg");

    write_trades_csv((dir / "trades.csv").string(), eval.trades);
    write_trade_stats_csv((dir / "trade_stats.csv").string(), {{"drl", trade_stats(eval.trades)}});
    add("trades.csv");
    add("trade_stats.csv");

    IntradayProfile profile = intraday_profiles(eval.trades, eval.horizon);
    write_intraday_csv((dir / "intraday.csv").string(), profile);
    write_intraday_svg((dir / "intraday.svg").string(), eval.name + " trade initiations", profile);
    add("intraday.csv");
    add("intraday.svg");
}

void write_portfolio_reports(const fs::path& dir, const std::string& label,
                             const std::vector<const AssetEvaluation*>& assets,
                             std::vector<std::string>& artifacts, const std::string& prefix) {
    fs::create_directories(dir);
    auto series_of = [&](auto member) {
        std::vector<ReturnSeries> components;
        for (const AssetEvaluation* a : assets) components.push_back(a->*member);
        return portfolio(components);
    };
    ReturnSeries drl = series_of(&AssetEvaluation::drl);
    ReturnSeries bh = series_of(&AssetEvaluation::buy_hold);
    ReturnSeries sh = series_of(&AssetEvaluation::sell_hold);
    ReturnSeries mom = series_of(&AssetEvaluation::momentum);

    std::vector<std::pair<std::string, MetricsReport>> metric_rows = {
        {"drl", compute_metrics(drl.daily_returns)},
        {"buy_hold", compute_metrics(bh.daily_returns)},
        {"sell_hold", compute_metrics(sh.daily_returns)},
        {"momentum", compute_metrics(mom.daily_returns)},
    };
    write_metrics_csv((dir / "metrics.csv").string(), metric_rows);
    write_metrics_json((dir / "metrics.json").string(), metric_rows);
    artifacts.push_back(prefix + "metrics.csv");
    artifacts.push_back(prefix + "metrics.json");

    const std::vector<std::pair<std::string, const ReturnSeries*>> curves = {
        {"drl", &drl}, {"buy_hold", &bh}, {"sell_hold", &sh}, {"momentum", &mom}};
    for (const auto& [name, series] : curves) {
        write_pnl_csv((dir / ("pnl_" + name + ".csv")).string(), *series);
        artifacts.push_back(prefix + "pnl_" + name + ".csv");
    }
    write_pnl_svg((dir / "pnl.svg").string(), "Portfolio (" + label + ") cumulative returns",
                  curves);
    artifacts.push_back(prefix + "pnl.svg");
}

struct EvaluateArgs {
    std::vector<std::string> runs;
    std::string out = default_out_dir();
    bool ablate = false;
    bool ablate_only = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
    if (args.runs.empty()) throw std::runtime_error("no --run directories given");
    fs::create_directories(args.out);

    std::vector<AssetEvaluation> assets;
    for (const std::string& run : args.runs) assets.push_back(evaluate_run_dir(run));

    RunManifest manifest;
    manifest.command = args.ablate_only ? "ablate" : "evaluate";
    for (const std::string& run : args.runs) {
        const std::string mpath = (fs::path(run) / "manifest.json").string();
        manifest.inputs[mpath] = file_fingerprint(mpath);
    }

    if (!args.ablate_only) {
        for (const AssetEvaluation& asset : assets) {
            fs::path dir = fs::path(args.out) / asset.name;
            write_asset_reports(dir, asset, manifest.artifacts, asset.name + "/");
        }

        // Equal-weight portfolios per asset class (all assets when no
        // classes are tagged).
        if (assets.size() > 1) {
            std::map<std::string, std::vector<const AssetEvaluation*>> groups;
            for (const AssetEvaluation& a : assets)
                groups[a.asset_class.empty() ? "all" : a.asset_class].push_back(&a);
            for (const auto& [label, members] : groups) {
                if (members.size() < 2) continue;
                fs::path dir = fs::path(args.out) / ("portfolio_" + label);
                write_portfolio_reports(dir, label, members, manifest.artifacts,
                                        "portfolio_" + label + "/");
            }
        }
    }

    if (args.ablate || args.ablate_only) {
        std::vector<AssetEvalInput> inputs;
        for (const AssetEvaluation& asset : assets) {
            AssetEvalInput input;
            input.name = asset.name;
            input.commission_bp = asset.commission_bp;
            for (std::size_t r = 0; r < asset.roll_params.size(); ++r) {
                input.roll_params.push_back(&asset.roll_params[r]);
                input.roll_days.push_back(&asset.roll_days[r]);
            }
            inputs.push_back(std::move(input));
        }
        auto results = feature_importance(inputs);
        write_ablation_csv((fs::path(args.out) / "ablation.csv").string(), results);
        write_ablation_svg((fs::path(args.out) / "ablation.svg").string(), results);
        manifest.artifacts.push_back("ablation.csv");
        manifest.artifacts.push_back("ablation.svg");
    }

    save_manifest((fs::path(args.out) / "manifest.json").string(), manifest);
    std::cout << "evaluated " << assets.size() << " asset(s) into " << args.out << "\n";
    return 0;
}

// --------------------------------------------------------------- report --

// Rebuilds the SVG plots of an existing evaluation directory from its CSV
// tables.
int cmd_report(const std::string& eval_dir) {
    RunManifest manifest = load_manifest((fs::path(eval_dir) / "manifest.json").string());

    auto read_returns = [](const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path.string());
        std::string line;
        std::getline(in, line);
        ReturnSeries series;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            // index,timestamp,minute_return,cumulative_return
            auto p1 = line.find(',');
            auto p2 = line.find(',', p1 + 1);
            auto p3 = line.find(',', p2 + 1);
            series.minute_returns.push_back(std::stod(line.substr(p2 + 1, p3 - p2 - 1)));
        }
        return series;
    };

    int rebuilt = 0;
    std::map<std::string, std::vector<std::string>> dirs;  // dir -> strategy labels
    for (const std::string& artifact : manifest.artifacts) {
        auto slash = artifact.find('/');
        if (slash == std::string::npos) continue;
        std::string dir = artifact.substr(0, slash);
        std::string file = artifact.substr(slash + 1);
        if (file.rfind("pnl_", 0) == 0 && file.size() > 8)
            dirs[dir].push_back(file.substr(4, file.size() - 8));
    }
    for (const auto& [dir, strategies] : dirs) {
        std::vector<std::pair<std::string, ReturnSeries>> loaded;
        for (const std::string& strategy : strategies)
            loaded.emplace_back(
                strategy, read_returns(fs::path(eval_dir) / dir / ("pnl_" + strategy + ".csv")));
        std::vector<std::pair<std::string, const ReturnSeries*>> curves;
        for (auto& [name, series] : loaded) curves.emplace_back(name, &series);
        write_pnl_svg((fs::path(eval_dir) / dir / "pnl.svg").string(),
                      dir + " cumulative returns", curves);
        ++rebuilt;
    }
    std::cout << "rebuilt " << rebuilt << " plot(s) in " << eval_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intraday PPO trading engine"};
    app.require_subcommand(1);

    // synth ---------------------------------------------------------------
    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic minute bars");
    synth_cmd->add_option("--days", synth.days, "number of trading days")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "generator seed");
    synth_cmd->add_option("--base-price", synth.base_price, "starting price");
    synth_cmd->add_option("--daily-vol", synth.daily_vol, "daily close-to-close volatility");
    synth_cmd->add_option("--vol-shape", synth.vol_shape, "flat or u-shape");
    synth_cmd->add_option("--pattern", synth.pattern,
                          "none, momentum, mean-reversion or time-of-day");
    synth_cmd->add_option("--strength", synth.strength, "planted pattern strength per bar");
    synth_cmd->add_option("--start-date", synth.start_date, "first calendar date (YYYY-MM-DD)");
    synth_cmd->add_option("--name", synth.name, "dataset name (file stem)");
    synth_cmd->add_option("--out", synth.out, "output directory");

    // train ---------------------------------------------------------------
    TrainArgs train;
    PpoConfig defaults;
    PpoConfig flag_values;
    CLI::App* train_cmd = app.add_subcommand("train", "walk-forward PPO training");
    train_cmd->add_option("--data", train.data, "input minute-bar CSV")->required();
    train_cmd->add_option("--out", train.out, "output directory");
    train_cmd->add_option("--config", train.config_file, "PPO config file (key=value)");
    train_cmd->add_option("--asset-name", train.asset_name, "asset name (default: file stem)");
    train_cmd->add_option("--asset-class", train.asset_class, "asset class tag for portfolios");
    train_cmd->add_option("--session-open", train.data_params.session_open, "session open HH:MM");
    train_cmd->add_option("--session-close", train.data_params.session_close,
                          "session close HH:MM");
    train_cmd->add_option("--utc-offset-min", train.data_params.utc_offset_min,
                          "exchange-time offset from UTC in minutes");
    train_cmd->add_option("--min-daily-volume", train.data_params.min_daily_volume,
                          "drop days with less traded volume");
    train_cmd->add_option("--train-months", train.split.train_months, "training window");
    train_cmd->add_option("--test-months", train.split.test_months, "test window");
    train_cmd->add_option("--val-months", train.split.val_months, "validation window");
    train_cmd->add_flag("--progress", train.progress, "print per-epoch validation rewards");

    auto* opt_lr = train_cmd->add_option("--learning-rate", flag_values.learning_rate);
    auto* opt_m = train_cmd->add_option("--minibatch", flag_values.minibatch_size);
    auto* opt_b = train_cmd->add_option("--batch", flag_values.batch_size);
    auto* opt_n = train_cmd->add_option("--actors", flag_values.num_actors);
    auto* opt_lambda = train_cmd->add_option("--gae-lambda", flag_values.gae_lambda);
    auto* opt_c = train_cmd->add_option("--value-coef", flag_values.value_coef);
    auto* opt_gamma = train_cmd->add_option("--gamma", flag_values.gamma);
    auto* opt_com = train_cmd->add_option("--commission-bp", flag_values.commission_bp);
    auto* opt_eps = train_cmd->add_option("--clip-eps", flag_values.clip_eps);
    auto* opt_k = train_cmd->add_option("--inner-epochs", flag_values.inner_epochs);
    auto* opt_pat = train_cmd->add_option("--patience", flag_values.early_stop_patience);
    auto* opt_max = train_cmd->add_option("--max-epochs", flag_values.max_epochs);
    auto* opt_adv = train_cmd->add_option("--advantage-norm", flag_values.advantage_normalization);
    auto* opt_ent = train_cmd->add_option("--entropy-coef", flag_values.entropy_coef);
    auto* opt_seed = train_cmd->add_option("--seed", flag_values.seed);

    // evaluate / ablate -----------------------------------------------------
    EvaluateArgs evaluate;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "evaluate trained rolls vs benchmarks");
    eval_cmd->add_option("--run", evaluate.runs, "train output directory (repeatable)")
        ->required();
    eval_cmd->add_option("--out", evaluate.out, "output directory");
    eval_cmd->add_flag("--ablate-features", evaluate.ablate, "add zero-out feature importance");

    EvaluateArgs ablate;
    ablate.ablate_only = true;
    CLI::App* ablate_cmd = app.add_subcommand("ablate", "zero-out feature importance only");
    ablate_cmd->add_option("--run", ablate.runs, "train output directory (repeatable)")
        ->required();
    ablate_cmd->add_option("--out", ablate.out, "output directory");

    // report ----------------------------------------------------------------
    std::string report_dir;
    CLI::App* report_cmd = app.add_subcommand("report", "rebuild plots from stored tables");
    report_cmd->add_option("--eval", report_dir, "evaluation output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth);
        if (train_cmd->parsed()) {
            // Precedence: command-line flag > config file > built-in default.
            PpoConfig config =
                train.config_file.empty() ? defaults : load_ppo_config(train.config_file);
            if (opt_lr->count()) config.learning_rate = flag_values.learning_rate;
            if (opt_m->count()) config.minibatch_size = flag_values.minibatch_size;
            if (opt_b->count()) config.batch_size = flag_values.batch_size;
            if (opt_n->count()) config.num_actors = flag_values.num_actors;
            if (opt_lambda->count()) config.gae_lambda = flag_values.gae_lambda;
            if (opt_c->count()) config.value_coef = flag_values.value_coef;
            if (opt_gamma->count()) config.gamma = flag_values.gamma;
            if (opt_com->count()) config.commission_bp = flag_values.commission_bp;
            if (opt_eps->count()) config.clip_eps = flag_values.clip_eps;
            if (opt_k->count()) config.inner_epochs = flag_values.inner_epochs;
            if (opt_pat->count()) config.early_stop_patience = flag_values.early_stop_patience;
            if (opt_max->count()) config.max_epochs = flag_values.max_epochs;
            if (opt_adv->count())
                config.advantage_normalization = flag_values.advantage_normalization;
            if (opt_ent->count()) config.entropy_coef = flag_values.entropy_coef;
            if (opt_seed->count()) config.seed = flag_values.seed;
            return cmd_train(train, config);
        }
        if (eval_cmd->parsed()) return cmd_evaluate(evaluate);
        if (ablate_cmd->parsed()) return cmd_evaluate(ablate);
        if (report_cmd->parsed()) return cmd_report(report_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
