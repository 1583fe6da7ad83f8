#pragma once

#include <string>
#include <vector>

#include "itrader/metrics.hpp"

namespace itrader {

// One asset's evaluation material: a walk-forward sequence of (checkpoint,
// test window) segments whose daily returns concatenate into the asset's
// test-period series.
struct AssetEvalInput {
    std::string name;
    std::vector<const PolicyParams*> roll_params;
    std::vector<const std::vector<TradingDay>*> roll_days;
    double commission_bp = 0.08;
};

struct AblationResult {
    std::string feature;
    std::vector<double> per_asset_sharpe;  // Sharpe with this feature zeroed, per asset
    double mean_sharpe_delta = 0.0;        // mean over assets of full - zeroed
};

// Zero-out feature importance: for each of the 13 state entries, greedy
// evaluation reruns with that entry forced to zero after normalization;
// importance is the full-model Sharpe minus the zeroed Sharpe, averaged
// over assets. Undefined Sharpe values (zero variance) enter the deltas
// as zero.
std::vector<AblationResult> feature_importance(const std::vector<AssetEvalInput>& assets);

}  // namespace itrader
