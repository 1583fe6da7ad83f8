#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace itrader {

// Reference windows used throughout the engine.
inline constexpr std::array<int, 5> kReturnWindows{1, 5, 15, 30, 60};
inline constexpr int kRsiWindow = 14;
inline constexpr int kAdxWindow = 14;
inline constexpr int kUltoscW1 = 7;
inline constexpr int kUltoscW2 = 14;
inline constexpr int kUltoscW3 = 28;
inline constexpr int kWillrWindow = 14;

// Simple returns (p_t - p_{t-w}) / p_{t-w} for the five lookback windows,
// evaluated at index t. Requires t >= 60.
std::array<double, 5> lookback_returns(const std::vector<double>& closes, std::size_t t);

// Each *_series function evaluates one indicator over a full price history,
// warm-starting at the front of the input. Entries before the indicator's
// warm-up are filled with its neutral value (50 for RSI/ULTOSC/WILLR, 0 for
// ADX). Bounded outputs lie in [0, 100].
//
// RSI uses Wilder's smoothing seeded by a simple average of the first w
// gains/losses; a flat window (no gains, no losses) reads 50.
std::vector<double> rsi_series(const std::vector<double>& closes, int window = kRsiWindow);

// Wilder ADX: smoothed DX of |+DI - -DI| / (+DI + -DI); 0/0 guards yield 0.
std::vector<double> adx_series(const std::vector<double>& highs, const std::vector<double>& lows,
                               const std::vector<double>& closes, int window = kAdxWindow);

// Ultimate oscillator over three windows; any window with zero total true
// range reads 50.
std::vector<double> ultosc_series(const std::vector<double>& highs,
                                  const std::vector<double>& lows,
                                  const std::vector<double>& closes, int w1 = kUltoscW1,
                                  int w2 = kUltoscW2, int w3 = kUltoscW3);

// Williams %R as a magnitude in [0, 100]: 0 when the close sits at the
// window high, 100 at the window low, 50 when the window is flat.
std::vector<double> willr_series(const std::vector<double>& highs,
                                 const std::vector<double>& lows,
                                 const std::vector<double>& closes, int window = kWillrWindow);

// Point evaluations at the last index of the supplied history. These throw
// std::invalid_argument when the history is shorter than the indicator's
// warm-up (w+1 closes for RSI, 2w+1 bars for ADX, w3+1 bars for ULTOSC,
// w bars for WILLR).
double rsi(const std::vector<double>& closes, int window = kRsiWindow);
double adx(const std::vector<double>& highs, const std::vector<double>& lows,
           const std::vector<double>& closes, int window = kAdxWindow);
double ultosc(const std::vector<double>& highs, const std::vector<double>& lows,
              const std::vector<double>& closes, int w1 = kUltoscW1, int w2 = kUltoscW2,
              int w3 = kUltoscW3);
double willr(const std::vector<double>& highs, const std::vector<double>& lows,
             const std::vector<double>& closes, int window = kWillrWindow);

}  // namespace itrader
