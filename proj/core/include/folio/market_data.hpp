#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "folio/date.hpp"

namespace folio {

/// One daily OHLCV bar. Prices in USD, volume in quote USD.
struct Bar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

/// Throws DataError unless high >= max(open, close), low <= min(open, close),
/// low > 0 and volume >= 0.
void validate_bar(const Bar& bar);

/// Daily bars for one asset, strictly ascending by date.
struct PriceSeries {
    std::string symbol;
    std::vector<Bar> bars;

    std::vector<double> closes() const;
};

/// Date-aligned close and simple-return matrix over the shared dates of a
/// set of series. returns[i][t] = closes[i][t+1] / closes[i][t] - 1.
struct AlignedPanel {
    std::vector<Date> dates;
    std::vector<std::string> symbols;
    std::vector<std::vector<double>> closes;   // [symbol][date]
    std::vector<std::vector<double>> returns;  // [symbol][date-1]

    std::size_t n_days() const { return dates.size(); }
    std::size_t n_assets() const { return symbols.size(); }
    /// Index of a symbol; throws DataError if absent.
    std::size_t index_of(const std::string& symbol) const;

    /// Builds a panel from closes, computing returns; validates shapes and
    /// positive prices.
    static AlignedPanel from_closes(std::vector<Date> dates, std::vector<std::string> symbols,
                                    std::vector<std::vector<double>> closes);
};

/// Parses one `date,open,high,low,close,volume` CSV file into a validated
/// series. Errors name the offending 1-based row (header is row 1).
PriceSeries load_series(const std::filesystem::path& path, const std::string& symbol);

/// Shortest decimal text that round-trips the exact double.
std::string format_double(double v);

/// Canonical CSV form: ISO dates, shortest round-trip decimals, '\n' endings.
/// write_csv(load_series(f)) reproduces a canonical f byte-for-byte.
std::string to_csv(const PriceSeries& series);
void write_csv(const PriceSeries& series, const std::filesystem::path& path);

/// Inner join over the date sets of all series; symbols keep input order.
AlignedPanel align(const std::vector<PriceSeries>& series_list);

/// r[t] = closes[t+1] / closes[t] - 1.
std::vector<double> simple_returns(std::span<const double> closes);

enum class Scenario { Bull, Crash, Sideways, RegimeSwitch };

Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario s);

struct SynthSpec {
    Scenario scenario = Scenario::Bull;
    int n_assets = 1;
    int n_days = 100;
    std::uint64_t seed = 0;
};

/// Deterministic geometric-Brownian daily series per asset, symbols SYN0..,
/// dates starting 2020-01-01. Crash embeds a 15-day -3%/day close segment
/// after day n_days/2; regime_switch alternates 60-day bull/bear blocks.
std::vector<PriceSeries> synth_series(const SynthSpec& spec);
AlignedPanel synth_generate(const SynthSpec& spec);

} // namespace folio
