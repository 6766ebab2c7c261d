#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "folio/date.hpp"
#include "folio/market_data.hpp"

namespace testutil {

inline folio::Date day0() { return folio::Date::from_ymd(2020, 1, 1); }

inline std::vector<folio::Date> date_range(std::size_t n, folio::Date start = day0()) {
    std::vector<folio::Date> dates;
    dates.reserve(n);
    for (std::size_t t = 0; t < n; ++t) dates.push_back(start.plus_days(static_cast<int>(t)));
    return dates;
}

inline folio::PriceSeries series_from_closes(std::string symbol, const std::vector<double>& closes,
                                             folio::Date start = day0()) {
    folio::PriceSeries s;
    s.symbol = std::move(symbol);
    s.bars.reserve(closes.size());
    for (std::size_t t = 0; t < closes.size(); ++t) {
        folio::Bar bar;
        bar.date = start.plus_days(static_cast<int>(t));
        bar.open = t == 0 ? closes[0] : closes[t - 1];
        bar.close = closes[t];
        bar.high = std::max(bar.open, bar.close) * 1.001;
        bar.low = std::min(bar.open, bar.close) * 0.999;
        bar.volume = 1.0e6;
        s.bars.push_back(bar);
    }
    return s;
}

inline folio::AlignedPanel panel_from_closes(const std::vector<std::string>& symbols,
                                             std::vector<std::vector<double>> closes,
                                             folio::Date start = day0()) {
    auto dates = date_range(closes.at(0).size(), start);
    return folio::AlignedPanel::from_closes(std::move(dates), symbols, std::move(closes));
}

/// Lognormal daily walk, deterministic per seed.
inline std::vector<double> walk_closes(std::uint64_t seed, std::size_t n, double daily_drift = 0.0,
                                       double daily_vol = 0.02, double c0 = 100.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(daily_drift, daily_vol);
    std::vector<double> closes{c0};
    closes.reserve(n);
    for (std::size_t t = 1; t < n; ++t) closes.push_back(closes.back() * std::exp(normal(rng)));
    return closes;
}

/// Exponential trend with a deterministic alternating wiggle; wiggle_frac = 0
/// gives the pure exponential.
inline std::vector<double> trending_closes(std::size_t n, double daily_log_drift,
                                           double wiggle_frac = 0.03, double c0 = 100.0) {
    std::vector<double> closes(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double wiggle = (t % 2 == 0) ? 1.0 + wiggle_frac : 1.0 - wiggle_frac;
        closes[t] = c0 * std::exp(daily_log_drift * static_cast<double>(t)) * wiggle;
    }
    return closes;
}

/// Price ping-ponging between c0 and c0*(1+amplitude).
inline std::vector<double> zigzag_closes(std::size_t n, double amplitude, double c0 = 100.0) {
    std::vector<double> closes(n);
    for (std::size_t t = 0; t < n; ++t) closes[t] = (t % 2 == 1) ? c0 * (1.0 + amplitude) : c0;
    return closes;
}

inline std::vector<double> constant_closes(std::size_t n, double c0 = 1.0) {
    return std::vector<double>(n, c0);
}

} // namespace testutil
