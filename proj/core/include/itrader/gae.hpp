#pragma once

#include <cstdint>
#include <vector>

namespace itrader {

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> value_targets;
};

// Generalized advantage estimation over a flat transition stream.
// rewards[t] is the reward following state t, values[t] = V(s_t), and
// done[t] marks episode ends: deltas bootstrap a terminal value of zero
// there and the recursion never carries across the flag. Value targets are
// advantages plus values. Throws on length mismatch.
GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<std::uint8_t>& done, double gamma, double lambda);

}  // namespace itrader
