#include "itrader/ablation.hpp"

#include <optional>
#include <stdexcept>

namespace itrader {

namespace {

std::vector<double> asset_daily_returns(const AssetEvalInput& asset,
                                        const std::optional<std::array<bool, kStateDim>>& mask) {
    std::vector<double> daily;
    for (std::size_t r = 0; r < asset.roll_params.size(); ++r) {
        const auto& days = *asset.roll_days[r];
        auto traces = evaluate_policy(*asset.roll_params[r], days,
                                      CostModel{asset.commission_bp}, mask);
        ReturnSeries series = strategy_returns(days, traces, asset.commission_bp);
        daily.insert(daily.end(), series.daily_returns.begin(), series.daily_returns.end());
    }
    return daily;
}

double sharpe_or_zero(const std::vector<double>& daily) {
    if (daily.size() < 2) return 0.0;
    MetricsReport m = compute_metrics(daily);
    return m.sharpe.value_or(0.0);
}

}  // namespace

std::vector<AblationResult> feature_importance(const std::vector<AssetEvalInput>& assets) {
    if (assets.empty()) throw std::invalid_argument("feature_importance: no assets");
    for (const AssetEvalInput& asset : assets)
        if (asset.roll_params.empty() || asset.roll_params.size() != asset.roll_days.size())
            throw std::invalid_argument("feature_importance: malformed asset input");

    std::vector<double> full_sharpe;
    full_sharpe.reserve(assets.size());
    for (const AssetEvalInput& asset : assets)
        full_sharpe.push_back(sharpe_or_zero(asset_daily_returns(asset, std::nullopt)));

    std::vector<AblationResult> results;
    results.reserve(kStateDim);
    for (int f = 0; f < kStateDim; ++f) {
        AblationResult result;
        result.feature = kFeatureNames[f];
        std::array<bool, kStateDim> mask{};
        mask[f] = true;
        double delta_sum = 0.0;
        for (std::size_t a = 0; a < assets.size(); ++a) {
            double zeroed = sharpe_or_zero(asset_daily_returns(assets[a], mask));
            result.per_asset_sharpe.push_back(zeroed);
            delta_sum += full_sharpe[a] - zeroed;
        }
        result.mean_sharpe_delta = delta_sum / static_cast<double>(assets.size());
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace itrader
