#include "folio/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "folio/errors.hpp"

namespace folio {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view field, std::size_t row, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw DataError("malformed " + std::string(what) + " at row " + std::to_string(row));
    }
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

constexpr std::string_view kCsvHeader = "date,open,high,low,close,volume";

} // namespace

void validate_bar(const Bar& bar) {
    if (bar.low <= 0.0) {
        throw DataError("non-positive price");
    }
    if (bar.high < std::max(bar.open, bar.close) || bar.low > std::min(bar.open, bar.close)) {
        throw DataError("inconsistent OHLC range");
    }
    if (bar.volume < 0.0) {
        throw DataError("negative volume");
    }
}

std::vector<double> PriceSeries::closes() const {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(b.close);
    return out;
}

std::size_t AlignedPanel::index_of(const std::string& symbol) const {
    auto it = std::find(symbols.begin(), symbols.end(), symbol);
    if (it == symbols.end()) {
        throw DataError("unknown symbol: " + symbol);
    }
    return static_cast<std::size_t>(it - symbols.begin());
}

AlignedPanel AlignedPanel::from_closes(std::vector<Date> dates, std::vector<std::string> symbols,
                                       std::vector<std::vector<double>> closes) {
    if (symbols.size() != closes.size()) {
        throw DataError("symbol/close column count mismatch");
    }
    if (dates.size() < 2) {
        throw DataError("fewer than 2 shared dates");
    }
    AlignedPanel panel;
    panel.dates = std::move(dates);
    panel.symbols = std::move(symbols);
    panel.closes = std::move(closes);
    panel.returns.reserve(panel.closes.size());
    for (std::size_t i = 0; i < panel.closes.size(); ++i) {
        if (panel.closes[i].size() != panel.dates.size()) {
            throw DataError("close column length mismatch for " + panel.symbols[i]);
        }
        panel.returns.push_back(simple_returns(panel.closes[i]));
    }
    return panel;
}

PriceSeries load_series(const std::filesystem::path& path, const std::string& symbol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw DataError("bad header in " + path.string() + ", expected '" +
                        std::string(kCsvHeader) + "'");
    }

    PriceSeries series;
    series.symbol = symbol;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 6) {
            throw DataError("malformed row " + std::to_string(row) + " in " + path.string());
        }
        Bar bar;
        try {
            bar.date = Date::parse(fields[0]);
        } catch (const DataError&) {
            throw DataError("malformed date at row " + std::to_string(row));
        }
        bar.open = parse_double(fields[1], row, "open");
        bar.high = parse_double(fields[2], row, "high");
        bar.low = parse_double(fields[3], row, "low");
        bar.close = parse_double(fields[4], row, "close");
        bar.volume = parse_double(fields[5], row, "volume");
        try {
            validate_bar(bar);
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + " at row " + std::to_string(row));
        }
        if (!series.bars.empty()) {
            if (bar.date == series.bars.back().date) {
                throw DataError("duplicate date at row " + std::to_string(row));
            }
            if (bar.date < series.bars.back().date) {
                throw DataError("unsorted dates at row " + std::to_string(row));
            }
        }
        series.bars.push_back(bar);
    }
    if (series.bars.empty()) {
        throw DataError("no bars in " + path.string());
    }
    return series;
}

std::string to_csv(const PriceSeries& series) {
    std::string out{kCsvHeader};
    out.push_back('\n');
    for (const auto& b : series.bars) {
        out += b.date.str();
        out.push_back(',');
        out += format_double(b.open);
        out.push_back(',');
        out += format_double(b.high);
        out.push_back(',');
        out += format_double(b.low);
        out.push_back(',');
        out += format_double(b.close);
        out.push_back(',');
        out += format_double(b.volume);
        out.push_back('\n');
    }
    return out;
}

void write_csv(const PriceSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << to_csv(series);
}

AlignedPanel align(const std::vector<PriceSeries>& series_list) {
    if (series_list.empty()) {
        throw DataError("no series to align");
    }
    std::unordered_set<std::string> seen;
    for (const auto& s : series_list) {
        if (!seen.insert(s.symbol).second) {
            throw DataError("duplicate symbol: " + s.symbol);
        }
    }

    // Intersect sorted date vectors pairwise.
    std::vector<Date> shared;
    shared.reserve(series_list.front().bars.size());
    for (const auto& b : series_list.front().bars) shared.push_back(b.date);
    for (std::size_t i = 1; i < series_list.size() && !shared.empty(); ++i) {
        std::vector<Date> dates;
        dates.reserve(series_list[i].bars.size());
        for (const auto& b : series_list[i].bars) dates.push_back(b.date);
        std::vector<Date> next;
        std::set_intersection(shared.begin(), shared.end(), dates.begin(), dates.end(),
                              std::back_inserter(next));
        shared = std::move(next);
    }
    if (shared.empty()) {
        throw DataError("empty intersection");
    }
    if (shared.size() < 2) {
        throw DataError("fewer than 2 shared dates");
    }

    std::vector<std::string> symbols;
    std::vector<std::vector<double>> closes;
    symbols.reserve(series_list.size());
    closes.reserve(series_list.size());
    for (const auto& s : series_list) {
        std::unordered_map<std::int64_t, double> by_date;
        by_date.reserve(s.bars.size());
        for (const auto& b : s.bars) by_date.emplace(b.date.unix_ms(), b.close);
        std::vector<double> col;
        col.reserve(shared.size());
        for (const auto& d : shared) col.push_back(by_date.at(d.unix_ms()));
        symbols.push_back(s.symbol);
        closes.push_back(std::move(col));
    }
    return AlignedPanel::from_closes(std::move(shared), std::move(symbols), std::move(closes));
}

std::vector<double> simple_returns(std::span<const double> closes) {
    if (closes.size() < 2) {
        throw DataError("need at least 2 closes for returns");
    }
    std::vector<double> out;
    out.reserve(closes.size() - 1);
    for (std::size_t t = 0; t + 1 < closes.size(); ++t) {
        if (closes[t] <= 0.0 || closes[t + 1] <= 0.0) {
            throw DataError("non-positive close at index " + std::to_string(t));
        }
        out.push_back(closes[t + 1] / closes[t] - 1.0);
    }
    return out;
}

Scenario parse_scenario(std::string_view name) {
    if (name == "bull") return Scenario::Bull;
    if (name == "crash") return Scenario::Crash;
    if (name == "sideways") return Scenario::Sideways;
    if (name == "regime_switch") return Scenario::RegimeSwitch;
    throw DataError("invalid scenario name: " + std::string(name));
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Bull: return "bull";
        case Scenario::Crash: return "crash";
        case Scenario::Sideways: return "sideways";
        case Scenario::RegimeSwitch: return "regime_switch";
    }
    return "?";
}

namespace {

struct GbmParams {
    double log_drift;  // annualized drift of log price
    double vol;        // annualized volatility
};

constexpr double kDt = 1.0 / 365.0;
constexpr int kCrashDays = 15;
constexpr double kCrashReturn = -0.03;
constexpr int kRegimeBlockDays = 60;

GbmParams scenario_params(Scenario s, int day) {
    switch (s) {
        case Scenario::Bull: return {1.00, 0.30};
        case Scenario::Crash: return {0.50, 0.35};
        case Scenario::Sideways: return {0.00, 0.12};
        case Scenario::RegimeSwitch:
            return (day / kRegimeBlockDays) % 2 == 0 ? GbmParams{1.50, 0.45}
                                                     : GbmParams{-1.50, 0.60};
    }
    return {0.0, 0.1};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::vector<PriceSeries> synth_series(const SynthSpec& spec) {
    if (spec.n_days < 10) {
        throw DataError("n_days must be >= 10");
    }
    if (spec.n_assets < 1) {
        throw DataError("n_assets must be >= 1");
    }
    const Date start = Date::from_ymd(2020, 1, 1);
    const int crash_from = spec.n_days / 2 + 1;  // first crashing close index

    std::vector<PriceSeries> out;
    out.reserve(static_cast<std::size_t>(spec.n_assets));
    for (int a = 0; a < spec.n_assets; ++a) {
        std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(a)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        std::vector<double> closes(static_cast<std::size_t>(spec.n_days));
        closes[0] = 100.0;
        for (int t = 1; t < spec.n_days; ++t) {
            const bool crashing = spec.scenario == Scenario::Crash && t >= crash_from &&
                                  t < crash_from + kCrashDays;
            if (crashing) {
                closes[t] = closes[t - 1] * (1.0 + kCrashReturn);
            } else {
                const GbmParams p = scenario_params(spec.scenario, t - 1);
                const double step =
                    p.log_drift * kDt + p.vol * std::sqrt(kDt) * gauss(rng);
                closes[t] = closes[t - 1] * std::exp(step);
            }
        }

        PriceSeries series;
        series.symbol = "SYN" + std::to_string(a);
        series.bars.reserve(closes.size());
        for (int t = 0; t < spec.n_days; ++t) {
            Bar bar;
            bar.date = start.plus_days(t);
            bar.open = t == 0 ? closes[0] : closes[t - 1];
            bar.close = closes[t];
            bar.high = std::max(bar.open, bar.close) * (1.0 + 0.01 * unit(rng));
            bar.low = std::min(bar.open, bar.close) * (1.0 - 0.01 * unit(rng));
            bar.volume = 1e6 * (1.0 + 9.0 * unit(rng));
            series.bars.push_back(bar);
        }
        out.push_back(std::move(series));
    }
    return out;
}

AlignedPanel synth_generate(const SynthSpec& spec) {
    return align(synth_series(spec));
}

} // namespace folio
