#include "itrader/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itrader {

std::array<double, 5> lookback_returns(const std::vector<double>& closes, std::size_t t) {
    if (t >= closes.size()) throw std::invalid_argument("lookback_returns: index out of range");
    if (t < 60) throw std::invalid_argument("lookback_returns: needs 60 bars of history");
    std::array<double, 5> out{};
    for (std::size_t i = 0; i < kReturnWindows.size(); ++i) {
        double base = closes[t - kReturnWindows[i]];
        out[i] = (closes[t] - base) / base;
    }
    return out;
}

std::vector<double> rsi_series(const std::vector<double>& closes, int window) {
    const std::size_t n = closes.size();
    std::vector<double> out(n, 50.0);
    if (n < static_cast<std::size_t>(window) + 1) return out;

    double avg_gain = 0.0;
    double avg_loss = 0.0;
    for (int j = 1; j <= window; ++j) {
        double d = closes[j] - closes[j - 1];
        avg_gain += std::max(d, 0.0);
        avg_loss += std::max(-d, 0.0);
    }
    avg_gain /= window;
    avg_loss /= window;

    auto value = [](double g, double l) { return g + l > 0.0 ? 100.0 * g / (g + l) : 50.0; };
    out[window] = value(avg_gain, avg_loss);
    for (std::size_t j = window + 1; j < n; ++j) {
        double d = closes[j] - closes[j - 1];
        avg_gain = (avg_gain * (window - 1) + std::max(d, 0.0)) / window;
        avg_loss = (avg_loss * (window - 1) + std::max(-d, 0.0)) / window;
        out[j] = value(avg_gain, avg_loss);
    }
    return out;
}

std::vector<double> adx_series(const std::vector<double>& highs, const std::vector<double>& lows,
                               const std::vector<double>& closes, int window) {
    const std::size_t n = closes.size();
    if (highs.size() != n || lows.size() != n)
        throw std::invalid_argument("adx_series: input length mismatch");
    std::vector<double> out(n, 0.0);
    if (n < 2 * static_cast<std::size_t>(window) + 1) return out;

    auto plus_dm = [&](std::size_t j) {
        double up = highs[j] - highs[j - 1];
        double down = lows[j - 1] - lows[j];
        return (up > down && up > 0.0) ? up : 0.0;
    };
    auto minus_dm = [&](std::size_t j) {
        double up = highs[j] - highs[j - 1];
        double down = lows[j - 1] - lows[j];
        return (down > up && down > 0.0) ? down : 0.0;
    };
    auto true_range = [&](std::size_t j) {
        return std::max({highs[j] - lows[j], std::abs(highs[j] - closes[j - 1]),
                         std::abs(lows[j] - closes[j - 1])});
    };
    auto dx_of = [](double pdm, double mdm, double tr) {
        if (tr <= 0.0) return 0.0;
        double pdi = pdm / tr;
        double mdi = mdm / tr;
        double sum = pdi + mdi;
        return sum > 0.0 ? 100.0 * std::abs(pdi - mdi) / sum : 0.0;
    };

    double sm_pdm = 0.0, sm_mdm = 0.0, sm_tr = 0.0;
    for (int j = 1; j <= window; ++j) {
        sm_pdm += plus_dm(j);
        sm_mdm += minus_dm(j);
        sm_tr += true_range(j);
    }
    sm_pdm /= window;
    sm_mdm /= window;
    sm_tr /= window;

    // DX becomes available at index `window`; ADX seeds at 2*window - 1 with
    // the mean of the first `window` DX values and is Wilder-smoothed after.
    double dx_sum = dx_of(sm_pdm, sm_mdm, sm_tr);
    double adx_val = 0.0;
    for (std::size_t j = window + 1; j < n; ++j) {
        sm_pdm = (sm_pdm * (window - 1) + plus_dm(j)) / window;
        sm_mdm = (sm_mdm * (window - 1) + minus_dm(j)) / window;
        sm_tr = (sm_tr * (window - 1) + true_range(j)) / window;
        double dx = dx_of(sm_pdm, sm_mdm, sm_tr);
        if (j < 2 * static_cast<std::size_t>(window) - 1) {
            dx_sum += dx;
        } else if (j == 2 * static_cast<std::size_t>(window) - 1) {
            dx_sum += dx;
            adx_val = dx_sum / window;
            out[j] = adx_val;
        } else {
            adx_val = (adx_val * (window - 1) + dx) / window;
            out[j] = adx_val;
        }
    }
    return out;
}

std::vector<double> ultosc_series(const std::vector<double>& highs,
                                  const std::vector<double>& lows,
                                  const std::vector<double>& closes, int w1, int w2, int w3) {
    const std::size_t n = closes.size();
    if (highs.size() != n || lows.size() != n)
        throw std::invalid_argument("ultosc_series: input length mismatch");
    std::vector<double> out(n, 50.0);
    if (n < static_cast<std::size_t>(w3) + 1) return out;

    std::vector<double> bp(n, 0.0), tr(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double lo = std::min(lows[j], closes[j - 1]);
        double hi = std::max(highs[j], closes[j - 1]);
        bp[j] = closes[j] - lo;
        tr[j] = hi - lo;
    }

    auto window_avg = [&](std::size_t end, int w, bool& ok) {
        double sbp = 0.0, str = 0.0;
        for (std::size_t j = end - w + 1; j <= end; ++j) {
            sbp += bp[j];
            str += tr[j];
        }
        if (str <= 0.0) {
            ok = false;
            return 0.0;
        }
        return sbp / str;
    };

    for (std::size_t j = w3; j < n; ++j) {
        bool ok = true;
        double a1 = window_avg(j, w1, ok);
        double a2 = window_avg(j, w2, ok);
        double a3 = window_avg(j, w3, ok);
        out[j] = ok ? 100.0 * (4.0 * a1 + 2.0 * a2 + a3) / 7.0 : 50.0;
    }
    return out;
}

std::vector<double> willr_series(const std::vector<double>& highs,
                                 const std::vector<double>& lows,
                                 const std::vector<double>& closes, int window) {
    const std::size_t n = closes.size();
    if (highs.size() != n || lows.size() != n)
        throw std::invalid_argument("willr_series: input length mismatch");
    std::vector<double> out(n, 50.0);
    if (n < static_cast<std::size_t>(window)) return out;

    for (std::size_t j = window - 1; j < n; ++j) {
        double hh = highs[j - window + 1];
        double ll = lows[j - window + 1];
        for (std::size_t k = j - window + 2; k <= j; ++k) {
            hh = std::max(hh, highs[k]);
            ll = std::min(ll, lows[k]);
        }
        out[j] = hh > ll ? 100.0 * (hh - closes[j]) / (hh - ll) : 50.0;
    }
    return out;
}

double rsi(const std::vector<double>& closes, int window) {
    if (closes.size() < static_cast<std::size_t>(window) + 1)
        throw std::invalid_argument("rsi: needs at least w+1 closes");
    return rsi_series(closes, window).back();
}

double adx(const std::vector<double>& highs, const std::vector<double>& lows,
           const std::vector<double>& closes, int window) {
    if (closes.size() < 2 * static_cast<std::size_t>(window) + 1)
        throw std::invalid_argument("adx: needs at least 2w+1 bars");
    return adx_series(highs, lows, closes, window).back();
}

double ultosc(const std::vector<double>& highs, const std::vector<double>& lows,
              const std::vector<double>& closes, int w1, int w2, int w3) {
    if (closes.size() < static_cast<std::size_t>(w3) + 1)
        throw std::invalid_argument("ultosc: needs at least w3+1 bars");
    return ultosc_series(highs, lows, closes, w1, w2, w3).back();
}

double willr(const std::vector<double>& highs, const std::vector<double>& lows,
             const std::vector<double>& closes, int window) {
    if (closes.size() < static_cast<std::size_t>(window))
        throw std::invalid_argument("willr: needs at least w bars");
    return willr_series(highs, lows, closes, window).back();
}

}  // namespace itrader
