#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folio/market_data.hpp"

namespace folio::universe {

struct AssetMeta {
    std::string symbol;
    double market_cap_usd = 0.0;
    double volume_24h_usd = 0.0;
};

enum class TrendClass { Upward, Volatile, Sideways, Declining };

std::string_view to_string(TrendClass t);
TrendClass trend_from_string(std::string_view s);

/// Thresholds for the trend rule: OLS of log close on day index over the
/// trailing window gives annualized log growth g and fit R^2 q; v is the
/// annualized volatility of daily returns in the window.
///   Upward    g >= +theta_up  and q >= r_min
///   Declining g <= -theta_down and q >= r_min
///   Sideways  |g| < theta_side and v < v_low
///   Volatile  otherwise
struct TrendThresholds {
    double theta_up = 0.20;
    double theta_down = 0.20;
    double theta_side = 0.10;
    double r_min = 0.30;
    double v_low = 0.40;
};

struct ScreenConfig {
    int top_n = 10;
    std::vector<std::string> include_list;
    int window = 90;
    TrendThresholds thresholds;
};

struct UniverseEntry {
    std::string symbol;
    int cap_rank = 0;  // 0 = no meta entry (include-list admission path)
    int vol_rank = 0;
    TrendClass trend = TrendClass::Volatile;
    bool pegged = false;
    bool admitted = false;
    std::string reason;  // empty iff admitted
};

struct UniverseReport {
    std::vector<UniverseEntry> entries;

    std::vector<std::string> admitted() const;
};

/// Meta CSV with header `symbol,market_cap_usd,volume_24h_usd`.
std::vector<AssetMeta> load_meta_csv(const std::filesystem::path& path);

/// Symbols inside the top-N of BOTH the market-cap and volume rankings.
/// Ranks are 1-based and dense; ties break by symbol lexicographic order.
std::set<std::string> rank_screen(const std::vector<AssetMeta>& metas, int top_n);

TrendClass classify_trend(std::span<const double> closes, int window,
                          const TrendThresholds& thresholds = {});
TrendClass classify_trend(const PriceSeries& series, int window,
                          const TrendThresholds& thresholds = {});

/// True iff the trailing-90-day (full history if shorter) annualized return
/// volatility is below 2%. Requires at least 31 bars.
bool filter_pegged(std::span<const double> closes);
bool filter_pegged(const PriceSeries& series);

/// Admission rule: (top-N by both ranks OR on the include list) AND trend in
/// {Upward, Volatile} AND not pegged. Include-list members still face the
/// trend and peg checks. Every panel symbol needs a meta entry or an
/// include-list spot; include-list symbols need price data.
UniverseReport select_universe(const std::vector<AssetMeta>& metas, const AlignedPanel& panel,
                               const ScreenConfig& config);

} // namespace folio::universe
