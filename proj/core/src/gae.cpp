#include "itrader/gae.hpp"

#include <stdexcept>

namespace itrader {

GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<std::uint8_t>& done, double gamma, double lambda) {
    const std::size_t n = rewards.size();
    if (values.size() != n || done.size() != n)
        throw std::invalid_argument("compute_gae: sequence lengths disagree");

    GaeResult out;
    out.advantages.assign(n, 0.0);
    out.value_targets.assign(n, 0.0);

    double carry = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const bool terminal = done[i] != 0;
        const double next_value = (terminal || i + 1 == n) ? 0.0 : values[i + 1];
        const double delta = rewards[i] + gamma * next_value - values[i];
        carry = terminal ? delta : delta + gamma * lambda * carry;
        out.advantages[i] = carry;
        out.value_targets[i] = carry + values[i];
    }
    return out;
}

}  // namespace itrader
