#include "folio/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "folio/errors.hpp"

namespace folio::engine {

namespace {

struct RunFrame {
    std::size_t d_start = 0;  // initial allocation close
    std::size_t d_end = 0;    // last marked close
};

RunFrame resolve_frame(const AlignedPanel& panel, const BacktestConfig& config,
                       bool needs_lookback) {
    if (config.start >= config.end) {
        throw DataError("start must precede end");
    }
    if (config.fee_bps < 0.0) {
        throw DataError("fee_bps must be >= 0");
    }
    if (config.initial_capital <= 0.0) {
        throw DataError("initial_capital must be positive");
    }
    if (config.symbols.empty()) {
        throw DataError("no symbols configured");
    }
    const auto lo = std::lower_bound(panel.dates.begin(), panel.dates.end(), config.start);
    const auto hi = std::upper_bound(panel.dates.begin(), panel.dates.end(), config.end);
    if (lo == panel.dates.end() || hi - lo < 2) {
        throw DataError("fewer than 2 trading days in range");
    }
    RunFrame frame;
    frame.d_start = static_cast<std::size_t>(lo - panel.dates.begin());
    frame.d_end = static_cast<std::size_t>(hi - panel.dates.begin()) - 1;
    if (needs_lookback) {
        const auto warmup = static_cast<std::size_t>(
            std::max(config.alloc.vol_window, config.alloc.sharpe_window));
        if (frame.d_start < warmup) {
            throw DataError("insufficient lookback history");
        }
    }
    return frame;
}

AlignedPanel sub_panel(const AlignedPanel& panel, const std::vector<std::string>& symbols) {
    std::vector<std::vector<double>> closes;
    closes.reserve(symbols.size());
    for (const auto& sym : symbols) {
        closes.push_back(panel.closes[panel.index_of(sym)]);
    }
    return AlignedPanel::from_closes(panel.dates, symbols, std::move(closes));
}

// Target weights for trading day d, or nullopt to let holdings drift.
using TargetFn = std::function<std::optional<std::vector<double>>(std::size_t d)>;

metrics::MetricsReport build_metrics(const std::vector<double>& equity_values,
                                     double turnover,
                                     const std::vector<metrics::TradeRecord>& trades,
                                     const std::vector<double>& bench_returns) {
    metrics::MetricsReport report;
    report.roi = metrics::roi(equity_values);
    report.mdd = metrics::mdd(equity_values);
    report.ret_dd = metrics::ret_dd(report.roi, report.mdd);

    const auto returns = simple_returns(equity_values);
    const double ann = metrics::daily_annualization();
    if (returns.size() >= 2) {
        report.vol = metrics::sample_std(returns) * ann;
        try {
            report.sharpe = metrics::sharpe(returns, 0.0, ann);
        } catch (const NumericError&) {
        }
        try {
            report.sortino = metrics::sortino(returns, 0.0, ann);
        } catch (const NumericError&) {
        }
    }
    if (returns.size() >= 3 && bench_returns.size() == returns.size()) {
        try {
            const auto ab = metrics::alpha_beta(returns, bench_returns);
            report.alpha = ab.alpha;
            report.beta = ab.beta;
        } catch (const NumericError&) {
        }
    }
    report.turnover = turnover;
    const auto stats = metrics::trade_stats(trades);
    report.win_rate = stats.win_rate;
    report.win_positions = stats.win_positions;
    report.total_positions = stats.total_positions;
    return report;
}

BacktestReport run_loop(const AlignedPanel& sub, const BacktestConfig& config,
                        const RunFrame& frame, const TargetFn& targets,
                        bool use_risk, const std::vector<double>& bench_returns) {
    const std::size_t n = sub.n_assets();
    const double initial = config.initial_capital;
    const double fee_rate = config.fee_bps / 1e4;

    std::vector<double> holdings(n, 0.0);
    double cash = initial;
    double equity = initial;

    risk::RiskState rstate;
    rstate.high_water_mark = equity;
    if (use_risk && config.risk) {
        config.risk->validate();
    }

    BacktestReport report;
    report.symbols = sub.symbols;
    report.config_echo = config;
    report.equity.dates.push_back(sub.dates[frame.d_start]);
    report.equity.values.push_back(1.0);

    struct Episode {
        Date entry;
        double pnl = 0.0;
    };
    std::vector<Episode> open_episode(n);
    std::vector<bool> in_episode(n, false);
    double turnover_sum = 0.0;  // traded fraction per day, initial entry excluded

    for (std::size_t d = frame.d_start + 1; d <= frame.d_end; ++d) {
        const Date exec_date = sub.dates[d - 1];
        const auto target_weights = targets(d);
        double mult = 1.0;
        if (use_risk && config.risk) {
            mult = risk::step(rstate, equity, *config.risk);
        }

        double traded = 0.0;
        if (target_weights) {
            double fee_total = 0.0;
            double invested = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double target_value = mult * (*target_weights)[i] * equity;
                const double fee = fee_rate * std::abs(target_value - holdings[i]);
                fee_total += fee;
                traded += std::abs(target_value - holdings[i]);
                if (!in_episode[i] && target_value > 0.0) {
                    in_episode[i] = true;
                    open_episode[i] = {exec_date, -fee};
                } else if (in_episode[i]) {
                    open_episode[i].pnl -= fee;
                    if (target_value <= 0.0) {
                        report.trades.push_back({sub.symbols[i], open_episode[i].entry,
                                                 exec_date, open_episode[i].pnl,
                                                 open_episode[i].pnl > 0.0});
                        in_episode[i] = false;
                    }
                }
                holdings[i] = target_value;
                invested += target_value;
            }
            cash = equity - invested - fee_total;
        }
        if (d > frame.d_start + 1) {
            turnover_sum += traded / equity;
        }

        const double post_trade = cash + std::accumulate(holdings.begin(), holdings.end(), 0.0);
        WeightRow row;
        row.date = exec_date;
        row.cash = cash / post_trade;
        row.weights.reserve(n);
        for (double h : holdings) row.weights.push_back(h / post_trade);
        report.weights_history.push_back(std::move(row));

        for (std::size_t i = 0; i < n; ++i) {
            const double pnl = holdings[i] * sub.returns[i][d - 1];
            holdings[i] += pnl;
            if (in_episode[i]) open_episode[i].pnl += pnl;
        }
        equity = cash + std::accumulate(holdings.begin(), holdings.end(), 0.0);
        report.equity.dates.push_back(sub.dates[d]);
        report.equity.values.push_back(equity / initial);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (in_episode[i]) {
            report.trades.push_back({sub.symbols[i], open_episode[i].entry,
                                     sub.dates[frame.d_end], open_episode[i].pnl,
                                     open_episode[i].pnl > 0.0});
        }
    }

    const std::size_t loop_days = frame.d_end - frame.d_start;
    const double turnover =
        loop_days > 1 ? turnover_sum / static_cast<double>(loop_days - 1) : 0.0;
    report.metrics = build_metrics(report.equity.values, turnover, report.trades,
                                   bench_returns);
    return report;
}

} // namespace

std::vector<double> benchmark_returns(const AlignedPanel& panel, const BacktestConfig& config) {
    const RunFrame frame = resolve_frame(panel, config, false);
    const std::size_t len = frame.d_end - frame.d_start + 1;
    if (config.benchmark == "equal_weight") {
        std::vector<double> values(len, 0.0);
        const double n = static_cast<double>(config.symbols.size());
        for (const auto& sym : config.symbols) {
            const auto& closes = panel.closes[panel.index_of(sym)];
            for (std::size_t k = 0; k < len; ++k) {
                values[k] += closes[frame.d_start + k] / closes[frame.d_start] / n;
            }
        }
        return simple_returns(values);
    }
    const auto& rets = panel.returns[panel.index_of(config.benchmark)];
    return {rets.begin() + static_cast<std::ptrdiff_t>(frame.d_start),
            rets.begin() + static_cast<std::ptrdiff_t>(frame.d_end)};
}

BacktestReport run_backtest(const AlignedPanel& panel, const BacktestConfig& config) {
    const RunFrame frame = resolve_frame(panel, config, true);
    const AlignedPanel sub = sub_panel(panel, config.symbols);
    const auto bench = benchmark_returns(panel, config);

    TargetFn hybrid = [&sub, &config](std::size_t d) -> std::optional<std::vector<double>> {
        const auto stats = alloc::estimate_stats(sub, d, config.alloc);
        return alloc::hybrid_weights(stats, config.alloc.sharpe_floor);
    };
    return run_loop(sub, config, frame, hybrid, /*use_risk=*/true, bench);
}

BacktestReport run_baseline(const AlignedPanel& panel, const BacktestConfig& config,
                            BaselineKind kind, const std::string& single_symbol) {
    const RunFrame frame = resolve_frame(panel, config, false);
    const AlignedPanel sub = sub_panel(panel, config.symbols);
    const auto bench = benchmark_returns(panel, config);
    const std::size_t n = sub.n_assets();

    TargetFn targets;
    switch (kind) {
        case BaselineKind::BuyAndHold:
            targets = [&frame, n](std::size_t d) -> std::optional<std::vector<double>> {
                if (d == frame.d_start + 1) return alloc::equal_weights(n);
                return std::nullopt;
            };
            break;
        case BaselineKind::SingleAsset: {
            const std::size_t idx = sub.index_of(single_symbol);
            targets = [&frame, n, idx](std::size_t d) -> std::optional<std::vector<double>> {
                if (d == frame.d_start + 1) {
                    std::vector<double> w(n, 0.0);
                    w[idx] = 1.0;
                    return w;
                }
                return std::nullopt;
            };
            break;
        }
        case BaselineKind::EqualWeightDaily:
            targets = [n](std::size_t) { return std::optional(alloc::equal_weights(n)); };
            break;
    }

    BacktestConfig echo = config;
    echo.risk.reset();  // baselines never run the drawdown state machine
    auto report = run_loop(sub, echo, frame, targets, /*use_risk=*/false, bench);
    return report;
}

ComparisonTable compare(
    const std::vector<std::pair<std::string, metrics::MetricsReport>>& reports) {
    if (reports.empty()) {
        throw DataError("nothing to compare");
    }
    ComparisonTable table;
    table.headers = {"Methods", "Sharpe", "Sortino", "ROI",  "MDD",
                     "Ret/DD",  "Alpha",  "Beta",    "Turnover"};
    table.rows.reserve(reports.size());
    for (const auto& [name, m] : reports) {
        table.rows.push_back({name, m});
    }
    return table;
}

} // namespace folio::engine
