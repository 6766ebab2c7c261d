#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folio/allocation.hpp"
#include "folio/market_data.hpp"
#include "folio/metrics.hpp"
#include "folio/risk.hpp"

namespace folio::engine {

struct BacktestConfig {
    std::vector<std::string> symbols;
    Date start;
    Date end;
    double fee_bps = 4.0;  // per side of traded notional
    alloc::AllocConfig alloc;
    std::optional<risk::RiskConfig> risk = risk::RiskConfig{};  // nullopt = disabled
    std::string benchmark = "equal_weight";  // or any panel symbol
    double initial_capital = 1.0;
};

/// Allocation in force for one day: fractions of post-trade equity, cash
/// first. Dated at the close where the trades executed.
struct WeightRow {
    Date date;
    double cash = 0.0;
    std::vector<double> weights;  // per config symbol order
};

struct BacktestReport {
    metrics::EquityCurve equity;
    std::vector<WeightRow> weights_history;
    std::vector<metrics::TradeRecord> trades;
    metrics::MetricsReport metrics;
    BacktestConfig config_echo;
    std::vector<std::string> symbols;
};

enum class BaselineKind { BuyAndHold, SingleAsset, EqualWeightDaily };

/// Daily-rebalanced hybrid-weight strategy with the drawdown state machine.
/// Each trading day: stats from data strictly before the day, hybrid target
/// weights, risk multiplier from the prior close's equity, trade at that
/// close paying fee_bps per unit of traded notional, then the day's returns
/// accrue. The residual (1 - multiplier) sits in cash earning zero.
BacktestReport run_backtest(const AlignedPanel& panel, const BacktestConfig& config);

/// Reference strategies, all with risk disabled: equal initial weights left
/// to drift (BuyAndHold), everything in one symbol (SingleAsset), or a daily
/// rebalance to 1/n (EqualWeightDaily).
BacktestReport run_baseline(const AlignedPanel& panel, const BacktestConfig& config,
                            BaselineKind kind, const std::string& single_symbol = "");

struct ComparisonRow {
    std::string name;
    metrics::MetricsReport metrics;
};

struct ComparisonTable {
    std::vector<std::string> headers;
    std::vector<ComparisonRow> rows;
};

/// One row per named report, column set Sharpe .. Turnover, input order kept.
ComparisonTable compare(const std::vector<std::pair<std::string, metrics::MetricsReport>>& reports);

/// Benchmark daily returns over the run's trading dates: a symbol's own
/// returns, or the unrebalanced equal-initial-weight portfolio of the run's
/// symbols for "equal_weight".
std::vector<double> benchmark_returns(const AlignedPanel& panel, const BacktestConfig& config);

} // namespace folio::engine
