#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "folio/date.hpp"

namespace folio::metrics {

/// Daily portfolio equity, normalized so values[0] == 1.0.
struct EquityCurve {
    std::vector<Date> dates;
    std::vector<double> values;
};

/// One closed position episode: held from entry to exit, pnl in portfolio
/// units net of the fees attributed to the asset.
struct TradeRecord {
    std::string symbol;
    Date entry_date;
    Date exit_date;
    double realized_pnl = 0.0;
    bool win = false;
};

struct TradeStats {
    double win_rate = 0.0;
    int win_positions = 0;
    int total_positions = 0;
};

struct AlphaBeta {
    double alpha = 0.0;  // annualized intercept
    double beta = 0.0;   // slope
};

/// Performance measures for one strategy run. Ratios that are undefined on
/// the run's data (zero variance, no downside, zero drawdown, degenerate
/// benchmark) are absent rather than faked.
struct MetricsReport {
    double roi = 0.0;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    double mdd = 0.0;
    std::optional<double> ret_dd;
    std::optional<double> alpha;
    std::optional<double> beta;
    double vol = 0.0;       // annualized
    double turnover = 0.0;  // mean per rebalance
    double win_rate = 0.0;
    int win_positions = 0;
    int total_positions = 0;
};

/// Annualization factor for daily crypto data (trades every calendar day).
double daily_annualization();

/// (V_end - V_start) / V_start.
double roi(std::span<const double> values);

/// mean(r - rf) / sample std(r - rf) * annualization.
/// Throws NumericError("degenerate volatility") on zero variance.
double sharpe(std::span<const double> returns, double rf = 0.0, double annualization = 1.0);

/// mean(r - rf) / downside_dev * annualization, downside_dev computed over
/// all periods with min(r - rf, 0). Throws NumericError("no downside") when
/// nothing falls below rf.
double sortino(std::span<const double> returns, double rf = 0.0, double annualization = 1.0);

/// Largest peak-to-trough fractional decline, single streaming pass.
double mdd(std::span<const double> values);

/// roi / mdd; absent when mdd == 0.
std::optional<double> ret_dd(double roi_value, double mdd_value);

/// OLS of strategy excess returns on benchmark excess returns; alpha is the
/// intercept annualized by *365.
AlphaBeta alpha_beta(std::span<const double> strategy_returns,
                     std::span<const double> benchmark_returns, double rf = 0.0);

/// Mean over consecutive snapshots of 0.5 * sum |w_t - w_{t-1}|.
double turnover(const std::vector<std::vector<double>>& weight_history);

TradeStats trade_stats(const std::vector<TradeRecord>& trades);

/// Sample (n-1) standard deviation.
double sample_std(std::span<const double> xs);
double mean(std::span<const double> xs);

} // namespace folio::metrics
