#include "folio/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "folio/errors.hpp"

namespace folio::metrics {

double daily_annualization() {
    return std::sqrt(365.0);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw DataError("mean of empty vector");
    }
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw DataError("need at least 2 observations for sample std");
    }
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double roi(std::span<const double> values) {
    if (values.size() < 2) {
        throw DataError("need at least 2 equity values for roi");
    }
    return (values.back() - values.front()) / values.front();
}

double sharpe(std::span<const double> returns, double rf, double annualization) {
    if (returns.size() < 2) {
        throw DataError("need at least 2 returns for sharpe");
    }
    std::vector<double> excess(returns.begin(), returns.end());
    for (double& r : excess) r -= rf;
    const double sd = sample_std(excess);
    if (sd == 0.0) {
        throw NumericError("degenerate volatility");
    }
    return mean(excess) / sd * annualization;
}

double sortino(std::span<const double> returns, double rf, double annualization) {
    if (returns.size() < 2) {
        throw DataError("need at least 2 returns for sortino");
    }
    double sum = 0.0;
    double downside_ss = 0.0;
    bool any_downside = false;
    for (double r : returns) {
        const double ex = r - rf;
        sum += ex;
        if (ex < 0.0) {
            downside_ss += ex * ex;
            any_downside = true;
        }
    }
    if (!any_downside) {
        throw NumericError("no downside");
    }
    const double downside_dev = std::sqrt(downside_ss / static_cast<double>(returns.size()));
    return sum / static_cast<double>(returns.size()) / downside_dev * annualization;
}

double mdd(std::span<const double> values) {
    if (values.empty()) {
        throw DataError("mdd of empty curve");
    }
    double peak = values.front();
    double worst = 0.0;
    for (double v : values) {
        peak = std::max(peak, v);
        worst = std::max(worst, (peak - v) / peak);
    }
    return worst;
}

std::optional<double> ret_dd(double roi_value, double mdd_value) {
    if (mdd_value < 0.0) {
        throw DataError("negative drawdown");
    }
    if (mdd_value == 0.0) {
        return std::nullopt;
    }
    return roi_value / mdd_value;
}

AlphaBeta alpha_beta(std::span<const double> strategy_returns,
                     std::span<const double> benchmark_returns, double rf) {
    if (strategy_returns.size() != benchmark_returns.size()) {
        throw DataError("return series length mismatch");
    }
    if (strategy_returns.size() < 3) {
        throw DataError("need at least 3 returns for alpha/beta");
    }
    const auto n = static_cast<double>(strategy_returns.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < strategy_returns.size(); ++i) {
        mx += benchmark_returns[i] - rf;
        my += strategy_returns[i] - rf;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < strategy_returns.size(); ++i) {
        const double dx = (benchmark_returns[i] - rf) - mx;
        const double dy = (strategy_returns[i] - rf) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx == 0.0) {
        throw NumericError("zero benchmark variance");
    }
    AlphaBeta out;
    out.beta = sxy / sxx;
    out.alpha = (my - out.beta * mx) * 365.0;
    return out;
}

double turnover(const std::vector<std::vector<double>>& weight_history) {
    if (weight_history.size() < 2) {
        throw DataError("need at least 2 weight snapshots for turnover");
    }
    double total = 0.0;
    for (std::size_t t = 1; t < weight_history.size(); ++t) {
        const auto& prev = weight_history[t - 1];
        const auto& cur = weight_history[t];
        if (prev.size() != cur.size()) {
            throw DataError("weight vector length mismatch");
        }
        double l1 = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) l1 += std::abs(cur[i] - prev[i]);
        total += 0.5 * l1;
    }
    return total / static_cast<double>(weight_history.size() - 1);
}

TradeStats trade_stats(const std::vector<TradeRecord>& trades) {
    TradeStats stats;
    stats.total_positions = static_cast<int>(trades.size());
    for (const auto& t : trades) {
        if (t.win) ++stats.win_positions;
    }
    stats.win_rate = stats.total_positions == 0
                         ? 0.0
                         : static_cast<double>(stats.win_positions) /
                               static_cast<double>(stats.total_positions);
    return stats;
}

} // namespace folio::metrics
