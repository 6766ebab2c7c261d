#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "folio/engine.hpp"
#include "folio/tuner.hpp"
#include "folio/universe.hpp"

namespace folio::report {

/// Ratio cells ("%.2f", "-" when absent) and percent cells ("%.1f%%").
std::string format_ratio(const std::optional<double>& value);
std::string format_pct(double fraction);

nlohmann::json to_json(const metrics::MetricsReport& m);
metrics::MetricsReport metrics_from_json(const nlohmann::json& j);

nlohmann::json to_json(const engine::BacktestConfig& config);
engine::BacktestConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const universe::UniverseReport& report);
nlohmann::json to_json(const tuner::TuneResult& result);

/// Pipe-separated table with padded columns; one trailing newline.
std::string render_table(const engine::ComparisonTable& table);

/// Everything one backtest run persists: the full effective config, the
/// named metric rows in table order, and the primary strategy's curves.
struct RunBundle {
    engine::BacktestConfig config;
    std::vector<std::pair<std::string, metrics::MetricsReport>> results;
    engine::BacktestReport primary;
};

/// Writes report.json, table.txt, equity.csv, weights.csv, trades.csv.
void write_run_dir(const std::filesystem::path& dir, const RunBundle& bundle);

/// The table-reproducing subset of report.json.
struct RunSummary {
    engine::BacktestConfig config;
    std::vector<std::pair<std::string, metrics::MetricsReport>> results;
};

RunSummary read_report(const std::filesystem::path& report_json);

/// ComparisonTable text for a summary's rows, identical to the table written
/// when the run was produced.
std::string render_summary(const RunSummary& summary);

std::string equity_csv(const metrics::EquityCurve& curve);
std::string weights_csv(const std::vector<engine::WeightRow>& rows,
                        const std::vector<std::string>& symbols);
std::string trades_csv(const std::vector<metrics::TradeRecord>& trades);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace folio::report
