#pragma once

#include <string>
#include <utility>
#include <vector>

#include "itrader/ablation.hpp"
#include "itrader/metrics.hpp"
#include "itrader/trade_stats.hpp"

namespace itrader {

// Report-bundle writers. Undefined metric values are emitted as "NA" in
// CSV and null in JSON.

void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, MetricsReport>>& rows);
void write_metrics_json(const std::string& path,
                        const std::vector<std::pair<std::string, MetricsReport>>& rows);

// Columns: index, timestamp, minute return, cumulative return.
void write_pnl_csv(const std::string& path, const ReturnSeries& series);
void write_pnl_svg(const std::string& path, const std::string& title,
                   const std::vector<std::pair<std::string, const ReturnSeries*>>& curves);

void write_trades_csv(const std::string& path, const std::vector<TradeRecord>& trades);
void write_trade_stats_csv(const std::string& path,
                           const std::vector<std::pair<std::string, TradeStats>>& rows);

void write_intraday_csv(const std::string& path, const IntradayProfile& profile);
void write_intraday_svg(const std::string& path, const std::string& title,
                        const IntradayProfile& profile);

void write_ablation_csv(const std::string& path, const std::vector<AblationResult>& results);
void write_ablation_svg(const std::string& path, const std::vector<AblationResult>& results);

}  // namespace itrader
