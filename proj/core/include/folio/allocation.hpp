#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "folio/market_data.hpp"

namespace folio::alloc {

/// Trailing per-period return stats for one asset.
struct AssetStats {
    std::string symbol;
    double sigma = 0.0;   // sample std of trailing returns, > 0
    double sharpe = 0.0;  // mean / std of trailing returns
};

struct AllocConfig {
    int vol_window = 30;
    int sharpe_window = 30;
    double sharpe_floor = 0.0;
};

/// Stats from the trailing windows ending the day before `as_of`; no close
/// at or after `as_of` is touched. Requires as_of to leave at least
/// max(vol_window, sharpe_window) returns strictly before it.
std::vector<AssetStats> estimate_stats(const AlignedPanel& panel, std::size_t as_of,
                                       const AllocConfig& config);

/// Blend of normalized inverse-volatility and floored-Sharpe weights in a
/// 50:50 ratio. Sharpe values below the floor are clamped to 0 before
/// normalizing; if every Sharpe is clamped the Sharpe half falls back to the
/// inverse-volatility half. Output sums to 1, elementwise >= 0.
std::vector<double> hybrid_weights(const std::vector<AssetStats>& stats,
                                   double sharpe_floor = 0.0);

std::vector<double> equal_weights(std::size_t n);

} // namespace folio::alloc
