#include "itrader/reports.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "itrader/svg.hpp"
#include "itrader/time_util.hpp"

namespace itrader {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    auto out = open_out(path);
    out << "strategy,ann_mean,ann_std,downside_dev,max_drawdown,sharpe,sortino,calmar,"
           "pct_positive,pos_neg_ratio\n";
    for (const auto& [name, m] : rows) {
        out << name << "," << num(m.ann_mean) << "," << num(m.ann_std) << ","
            << num(m.downside_dev) << "," << num(m.max_drawdown) << "," << opt(m.sharpe) << ","
            << opt(m.sortino) << "," << opt(m.calmar) << "," << num(m.pct_positive) << ","
            << opt(m.pos_neg_ratio) << "\n";
    }
}

void write_metrics_json(const std::string& path,
                        const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    nlohmann::json root = nlohmann::json::object();
    for (const auto& [name, m] : rows) {
        root[name] = {{"ann_mean", m.ann_mean},
                      {"ann_std", m.ann_std},
                      {"downside_dev", m.downside_dev},
                      {"max_drawdown", m.max_drawdown},
                      {"sharpe", opt_json(m.sharpe)},
                      {"sortino", opt_json(m.sortino)},
                      {"calmar", opt_json(m.calmar)},
                      {"pct_positive", m.pct_positive},
                      {"pos_neg_ratio", opt_json(m.pos_neg_ratio)}};
    }
    auto out = open_out(path);
    out << root.dump(2) << "\n";
}

void write_pnl_csv(const std::string& path, const ReturnSeries& series) {
    auto out = open_out(path);
    out << "index,timestamp,minute_return,cumulative_return\n";
    auto curve = cumulative_curve(series.minute_returns);
    for (std::size_t i = 0; i < series.minute_returns.size(); ++i) {
        out << i << "," << format_iso8601_utc(series.timestamps[i]) << ","
            << num(series.minute_returns[i]) << "," << num(curve[i]) << "\n";
    }
}

void write_pnl_svg(const std::string& path, const std::string& title,
                   const std::vector<std::pair<std::string, const ReturnSeries*>>& curves) {
    std::vector<LineSeries> lines;
    lines.reserve(curves.size());
    for (const auto& [label, series] : curves)
        lines.push_back(LineSeries{label, cumulative_curve(series->minute_returns)});
    write_line_plot_svg(path, title, lines);
}

void write_trades_csv(const std::string& path, const std::vector<TradeRecord>& trades) {
    auto out = open_out(path);
    out << "side,entry_step,entry_price,exit_step,exit_price,net_return,duration\n";
    for (const TradeRecord& t : trades) {
        out << t.side << "," << t.entry_step << "," << num(t.entry_price) << "," << t.exit_step
            << "," << num(t.exit_price) << "," << num(t.net_return) << "," << t.duration << "\n";
    }
}

void write_trade_stats_csv(const std::string& path,
                           const std::vector<std::pair<std::string, TradeStats>>& rows) {
    auto out = open_out(path);
    out << "strategy,n_trades,win_rate,mean_positive,mean_negative,pos_neg_ratio,"
           "expected_return,mean_duration\n";
    for (const auto& [name, s] : rows) {
        out << name << "," << s.n_trades << "," << opt(s.win_rate) << "," << opt(s.mean_positive)
            << "," << opt(s.mean_negative) << "," << opt(s.pos_neg_ratio) << ","
            << opt(s.expected_return) << "," << opt(s.mean_duration) << "\n";
    }
}

void write_intraday_csv(const std::string& path, const IntradayProfile& profile) {
    auto out = open_out(path);
    out << "bucket_start_minute,pct_initiated,mean_duration\n";
    for (std::size_t b = 0; b < profile.pct_initiated.size(); ++b) {
        out << b * profile.bucket_minutes << "," << num(profile.pct_initiated[b]) << ","
            << opt(profile.mean_duration[b]) << "\n";
    }
}

void write_intraday_svg(const std::string& path, const std::string& title,
                        const IntradayProfile& profile) {
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < profile.pct_initiated.size(); ++b)
        labels.push_back("+" + std::to_string(b * profile.bucket_minutes) + "m");
    write_bar_plot_svg(path, title, labels, profile.pct_initiated);
}

void write_ablation_csv(const std::string& path, const std::vector<AblationResult>& results) {
    auto out = open_out(path);
    out << "feature,mean_sharpe_delta";
    if (!results.empty())
        for (std::size_t a = 0; a < results.front().per_asset_sharpe.size(); ++a)
            out << ",sharpe_zeroed_" << a;
    out << "\n";
    for (const AblationResult& r : results) {
        out << r.feature << "," << num(r.mean_sharpe_delta);
        for (double s : r.per_asset_sharpe) out << "," << num(s);
        out << "\n";
    }
}

void write_ablation_svg(const std::string& path, const std::vector<AblationResult>& results) {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const AblationResult& r : results) {
        labels.push_back(r.feature);
        values.push_back(r.mean_sharpe_delta);
    }
    write_bar_plot_svg(path, "Feature importance (Sharpe drop when zeroed)", labels, values);
}

}  // namespace itrader
