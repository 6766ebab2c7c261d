#include "folio/allocation.hpp"

#include <algorithm>
#include <span>

#include "folio/errors.hpp"
#include "folio/metrics.hpp"

namespace folio::alloc {

std::vector<AssetStats> estimate_stats(const AlignedPanel& panel, std::size_t as_of,
                                       const AllocConfig& config) {
    if (config.vol_window < 2 || config.sharpe_window < 2) {
        throw DataError("windows must be >= 2");
    }
    const auto need = static_cast<std::size_t>(
        std::max(config.vol_window, config.sharpe_window));
    // Return r[t] uses closes t and t+1, so returns strictly before `as_of`
    // are indices 0 .. as_of-2.
    if (as_of < need + 1 || as_of > panel.n_days()) {
        throw DataError("insufficient history for as_of index " + std::to_string(as_of));
    }
    const std::size_t last = as_of - 1;  // one past the last usable return index

    std::vector<AssetStats> out;
    out.reserve(panel.n_assets());
    for (std::size_t i = 0; i < panel.n_assets(); ++i) {
        const auto& rets = panel.returns[i];
        std::span<const double> vol_span(rets.data() + last - config.vol_window,
                                         static_cast<std::size_t>(config.vol_window));
        std::span<const double> sharpe_span(rets.data() + last - config.sharpe_window,
                                            static_cast<std::size_t>(config.sharpe_window));
        AssetStats stats;
        stats.symbol = panel.symbols[i];
        stats.sigma = metrics::sample_std(vol_span);
        if (stats.sigma == 0.0) {
            throw NumericError("degenerate volatility for " + panel.symbols[i]);
        }
        const double sharpe_sd = metrics::sample_std(sharpe_span);
        if (sharpe_sd == 0.0) {
            throw NumericError("degenerate volatility for " + panel.symbols[i]);
        }
        stats.sharpe = metrics::mean(sharpe_span) / sharpe_sd;
        out.push_back(std::move(stats));
    }
    return out;
}

std::vector<double> hybrid_weights(const std::vector<AssetStats>& stats, double sharpe_floor) {
    if (stats.empty()) {
        throw DataError("empty stats list");
    }
    const std::size_t n = stats.size();
    std::vector<double> inv_vol(n);
    double inv_vol_sum = 0.0;
    double floored_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (stats[i].sigma <= 0.0) {
            throw NumericError("non-positive volatility for " + stats[i].symbol);
        }
        inv_vol[i] = 1.0 / stats[i].sigma;
        inv_vol_sum += inv_vol[i];
        floored_sum += std::max(stats[i].sharpe - sharpe_floor, 0.0);
    }

    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w_iv = inv_vol[i] / inv_vol_sum;
        const double w_sharpe =
            floored_sum > 0.0 ? std::max(stats[i].sharpe - sharpe_floor, 0.0) / floored_sum
                              : w_iv;
        weights[i] = 0.5 * w_iv + 0.5 * w_sharpe;
    }
    return weights;
}

std::vector<double> equal_weights(std::size_t n) {
    if (n == 0) {
        throw DataError("cannot build weights for 0 assets");
    }
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

} // namespace folio::alloc
