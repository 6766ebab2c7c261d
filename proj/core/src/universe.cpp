#include "folio/universe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "folio/errors.hpp"
#include "folio/metrics.hpp"

namespace folio::universe {

std::string_view to_string(TrendClass t) {
    switch (t) {
        case TrendClass::Upward: return "Upward";
        case TrendClass::Volatile: return "Volatile";
        case TrendClass::Sideways: return "Sideways";
        case TrendClass::Declining: return "Declining";
    }
    return "?";
}

TrendClass trend_from_string(std::string_view s) {
    if (s == "Upward") return TrendClass::Upward;
    if (s == "Volatile") return TrendClass::Volatile;
    if (s == "Sideways") return TrendClass::Sideways;
    if (s == "Declining") return TrendClass::Declining;
    throw DataError("unknown trend class: " + std::string(s));
}

std::vector<std::string> UniverseReport::admitted() const {
    std::vector<std::string> out;
    for (const auto& e : entries) {
        if (e.admitted) out.push_back(e.symbol);
    }
    return out;
}

std::vector<AssetMeta> load_meta_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "symbol,market_cap_usd,volume_24h_usd") {
        throw DataError("bad meta header in " + path.string());
    }
    std::vector<AssetMeta> metas;
    std::unordered_set<std::string> seen;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw DataError("malformed meta row " + std::to_string(row));
        }
        AssetMeta m;
        m.symbol = line.substr(0, c1);
        auto parse = [&](std::string_view s, double& out) {
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc{} || ptr != s.data() + s.size() || out < 0.0) {
                throw DataError("malformed meta value at row " + std::to_string(row));
            }
        };
        const std::string_view rest{line};
        parse(rest.substr(c1 + 1, c2 - c1 - 1), m.market_cap_usd);
        parse(rest.substr(c2 + 1), m.volume_24h_usd);
        if (m.symbol.empty() || !seen.insert(m.symbol).second) {
            throw DataError("duplicate or empty symbol at row " + std::to_string(row));
        }
        metas.push_back(std::move(m));
    }
    if (metas.empty()) {
        throw DataError("no meta rows in " + path.string());
    }
    return metas;
}

namespace {

/// 1-based dense ranks over `metas`, descending by the chosen field, ties
/// broken by symbol.
std::unordered_map<std::string, int> rank_by(const std::vector<AssetMeta>& metas,
                                             double AssetMeta::* field) {
    std::vector<const AssetMeta*> order;
    order.reserve(metas.size());
    for (const auto& m : metas) order.push_back(&m);
    std::sort(order.begin(), order.end(), [field](const AssetMeta* a, const AssetMeta* b) {
        if (a->*field != b->*field) return a->*field > b->*field;
        return a->symbol < b->symbol;
    });
    std::unordered_map<std::string, int> ranks;
    ranks.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        ranks.emplace(order[i]->symbol, static_cast<int>(i + 1));
    }
    return ranks;
}

struct OlsFit {
    double slope = 0.0;
    double r2 = 0.0;
};

OlsFit ols_log_close(std::span<const double> closes) {
    const auto n = static_cast<double>(closes.size());
    double mx = (n - 1.0) / 2.0;
    double my = 0.0;
    for (double c : closes) my += std::log(c);
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t t = 0; t < closes.size(); ++t) {
        const double dx = static_cast<double>(t) - mx;
        const double dy = std::log(closes[t]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
    return fit;
}

constexpr double kPegVolMax = 0.02;
constexpr int kPegWindow = 90;  // trailing returns
constexpr int kPegMinBars = 31;

} // namespace

std::set<std::string> rank_screen(const std::vector<AssetMeta>& metas, int top_n) {
    if (metas.empty()) {
        throw DataError("empty meta list");
    }
    if (top_n < 1) {
        throw DataError("top_n must be >= 1");
    }
    const auto cap_ranks = rank_by(metas, &AssetMeta::market_cap_usd);
    const auto vol_ranks = rank_by(metas, &AssetMeta::volume_24h_usd);
    std::set<std::string> out;
    for (const auto& m : metas) {
        if (cap_ranks.at(m.symbol) <= top_n && vol_ranks.at(m.symbol) <= top_n) {
            out.insert(m.symbol);
        }
    }
    return out;
}

TrendClass classify_trend(std::span<const double> closes, int window,
                          const TrendThresholds& th) {
    if (window < 30) {
        throw DataError("trend window must be >= 30");
    }
    if (closes.size() < static_cast<std::size_t>(window)) {
        throw DataError("window longer than series");
    }
    const auto tail = closes.subspan(closes.size() - static_cast<std::size_t>(window));
    for (double c : tail) {
        if (c <= 0.0) throw DataError("non-positive close in trend window");
    }
    const OlsFit fit = ols_log_close(tail);
    const double g = fit.slope * 365.0;
    const double v = metrics::sample_std(simple_returns(tail)) * std::sqrt(365.0);

    if (g >= th.theta_up && fit.r2 >= th.r_min) return TrendClass::Upward;
    if (g <= -th.theta_down && fit.r2 >= th.r_min) return TrendClass::Declining;
    if (std::abs(g) < th.theta_side && v < th.v_low) return TrendClass::Sideways;
    return TrendClass::Volatile;
}

TrendClass classify_trend(const PriceSeries& series, int window, const TrendThresholds& th) {
    return classify_trend(series.closes(), window, th);
}

bool filter_pegged(std::span<const double> closes) {
    if (closes.size() < kPegMinBars) {
        throw DataError("fewer than 31 bars");
    }
    const std::size_t n_rets = std::min<std::size_t>(kPegWindow, closes.size() - 1);
    const auto tail = closes.subspan(closes.size() - (n_rets + 1));
    const double vol = metrics::sample_std(simple_returns(tail)) * std::sqrt(365.0);
    return vol < kPegVolMax;
}

bool filter_pegged(const PriceSeries& series) {
    return filter_pegged(series.closes());
}

UniverseReport select_universe(const std::vector<AssetMeta>& metas, const AlignedPanel& panel,
                               const ScreenConfig& config) {
    std::unordered_set<std::string> included(config.include_list.begin(),
                                             config.include_list.end());
    for (const auto& sym : config.include_list) {
        if (std::find(panel.symbols.begin(), panel.symbols.end(), sym) ==
            panel.symbols.end()) {
            throw DataError("include_list symbol lacking price data: " + sym);
        }
    }
    std::unordered_map<std::string, const AssetMeta*> meta_by_symbol;
    for (const auto& m : metas) meta_by_symbol.emplace(m.symbol, &m);
    for (const auto& sym : panel.symbols) {
        if (!meta_by_symbol.count(sym) && !included.count(sym)) {
            throw DataError("panel symbol without meta entry: " + sym);
        }
    }

    const auto cap_ranks = rank_by(metas, &AssetMeta::market_cap_usd);
    const auto vol_ranks = rank_by(metas, &AssetMeta::volume_24h_usd);
    const auto screened = metas.empty() ? std::set<std::string>{}
                                        : rank_screen(metas, config.top_n);

    UniverseReport report;
    report.entries.reserve(panel.n_assets());
    for (std::size_t i = 0; i < panel.n_assets(); ++i) {
        UniverseEntry entry;
        entry.symbol = panel.symbols[i];
        if (auto it = cap_ranks.find(entry.symbol); it != cap_ranks.end()) {
            entry.cap_rank = it->second;
            entry.vol_rank = vol_ranks.at(entry.symbol);
        }
        entry.trend = classify_trend(panel.closes[i], config.window, config.thresholds);
        entry.pegged = filter_pegged(panel.closes[i]);

        const bool rank_pass = screened.count(entry.symbol) > 0;
        const bool include_pass = included.count(entry.symbol) > 0;
        const bool trend_pass =
            entry.trend == TrendClass::Upward || entry.trend == TrendClass::Volatile;
        if (!rank_pass && !include_pass) {
            entry.reason = "rank";
        } else if (entry.pegged) {
            entry.reason = "pegged";
        } else if (!trend_pass) {
            entry.reason = "trend:" + std::string(to_string(entry.trend));
        } else {
            entry.admitted = true;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace folio::universe
