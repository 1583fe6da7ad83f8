#include "itrader/features.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itrader {

std::vector<PriceFeatures> compute_price_features(const TradingDay& day) {
    const std::size_t n = day.bars.size();
    std::vector<double> highs(n), lows(n), closes(n);
    for (std::size_t i = 0; i < n; ++i) {
        highs[i] = day.bars[i].high;
        lows[i] = day.bars[i].low;
        closes[i] = day.bars[i].close;
    }

    auto rsi_s = rsi_series(closes);
    auto adx_s = adx_series(highs, lows, closes);
    auto ult_s = ultosc_series(highs, lows, closes);
    auto wil_s = willr_series(highs, lows, closes);

    std::vector<PriceFeatures> out;
    out.reserve(day.horizon());
    for (int i = day.decision_begin; i < day.decision_end; ++i) {
        PriceFeatures f;
        f.returns = lookback_returns(closes, static_cast<std::size_t>(i));
        f.rsi = rsi_s[i];
        f.adx = adx_s[i];
        f.ultosc = ult_s[i];
        f.willr = wil_s[i];
        out.push_back(f);
    }
    return out;
}

PositionalFeatures positional_features(const std::vector<SpellRecord>& completed,
                                       const std::optional<PositionSpell>& current, int t,
                                       int horizon, double current_close,
                                       double first_decision_open) {
    PositionalFeatures out;
    out.time_left = horizon - 1 - t;
    out.position = current ? current->action : 0;

    if (current) {
        out.position_return = (current->action * (current_close - current->entry_exec_price) -
                               current->entry_tx) /
                              current->entry_exec_price;
    }

    double pnl = 0.0;
    for (const SpellRecord& rec : completed) pnl += rec.spell.entry_exec_price * rec.hpr;
    if (current) pnl += current->entry_exec_price * out.position_return;
    out.daily_return = pnl / first_decision_open;
    return out;
}

NormalizerConfig normalizer_config_for_day(const TradingDay& day) {
    NormalizerConfig cfg;
    cfg.return_window = 5 * static_cast<int>(day.bars.size());
    cfg.episode_window = 100 * day.horizon();
    cfg.time_left_max = day.horizon() - 1;
    return cfg;
}

RunningStat::RunningStat(std::size_t capacity) : ring_(capacity), capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("RunningStat: capacity must be positive");
}

void RunningStat::push(double x) {
    if (!shift_set_) {
        shift_ = x;
        shift_set_ = true;
    }
    double q = x - shift_;
    if (size_ == capacity_) {
        double old = ring_[head_] - shift_;
        sum_ -= old;
        sumsq_ -= old * old;
    } else {
        ++size_;
    }
    ring_[head_] = x;
    head_ = (head_ + 1) % capacity_;
    sum_ += q;
    sumsq_ += q * q;
}

double RunningStat::mean() const {
    if (size_ == 0) return 0.0;
    return shift_ + sum_ / static_cast<double>(size_);
}

double RunningStat::sample_std() const {
    if (size_ < 2) return 0.0;
    double n = static_cast<double>(size_);
    double var = (sumsq_ - sum_ * sum_ / n) / (n - 1.0);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

Normalizer::Normalizer(NormalizerConfig config)
    : config_(config),
      return_stats_(kReturnWindows.size(), RunningStat(config.return_window)),
      pr_stat_(config.episode_window),
      dr_stat_(config.episode_window) {}

double Normalizer::standardized(const RunningStat& stat, double x) const {
    if (stat.size() < 2) return 0.0;
    double sd = stat.sample_std();
    if (sd < config_.epsilon) return 0.0;
    return (x - stat.mean()) / sd;
}

Observation Normalizer::normalize_and_update(const PriceFeatures& price,
                                             const PositionalFeatures& pos) {
    Observation obs;
    for (std::size_t i = 0; i < kReturnWindows.size(); ++i)
        obs.values[i] = standardized(return_stats_[i], price.returns[i]);
    obs.values[5] = price.rsi / 50.0 - 1.0;
    obs.values[6] = price.adx / 50.0 - 1.0;
    obs.values[7] = price.ultosc / 50.0 - 1.0;
    obs.values[8] = price.willr / 50.0 - 1.0;
    obs.values[9] = 2.0 * pos.time_left / config_.time_left_max - 1.0;
    obs.values[10] = pos.position;
    obs.values[11] = standardized(pr_stat_, pos.position_return);
    obs.values[12] = standardized(dr_stat_, pos.daily_return);

    for (std::size_t i = 0; i < kReturnWindows.size(); ++i)
        return_stats_[i].push(price.returns[i]);
    pr_stat_.push(pos.position_return);
    dr_stat_.push(pos.daily_return);
    return obs;
}

std::array<double, kStateDim> raw_feature_vector(const PriceFeatures& price,
                                                 const PositionalFeatures& pos) {
    std::array<double, kStateDim> raw{};
    for (std::size_t i = 0; i < 5; ++i) raw[i] = price.returns[i];
    raw[5] = price.rsi;
    raw[6] = price.adx;
    raw[7] = price.ultosc;
    raw[8] = price.willr;
    raw[9] = pos.time_left;
    raw[10] = pos.position;
    raw[11] = pos.position_return;
    raw[12] = pos.daily_return;
    return raw;
}

void write_feature_dump(const std::string& path, const std::vector<FeatureDumpRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "date,step";
    for (const char* name : kFeatureNames) out << ",raw_" << name;
    for (const char* name : kFeatureNames) out << ",norm_" << name;
    out << "\n";
    char buf[32];
    for (const FeatureDumpRow& row : rows) {
        out << format_date(row.date) << "," << row.step;
        for (double v : row.raw) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        for (double v : row.normalized) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        out << "\n";
    }
}

std::vector<FeatureDumpRow> read_feature_dump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");

    std::vector<FeatureDumpRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        FeatureDumpRow row;
        std::getline(ls, field, ',');
        row.date = parse_date(field);
        std::getline(ls, field, ',');
        row.step = std::stoi(field);
        auto read_double = [&]() {
            std::getline(ls, field, ',');
            double v = 0.0;
            auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{}) throw std::runtime_error(path + ": bad value '" + field + "'");
            (void)p;
            return v;
        };
        for (int i = 0; i < kStateDim; ++i) row.raw[i] = read_double();
        for (int i = 0; i < kStateDim; ++i) row.normalized[i] = read_double();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace itrader
