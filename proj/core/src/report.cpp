#include "folio/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "folio/errors.hpp"

namespace folio::report {

namespace {

std::string printf_fmt(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

nlohmann::json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

std::string pad(const std::string& text, std::size_t width, bool left_align) {
    if (text.size() >= width) return text;
    const std::string fill(width - text.size(), ' ');
    return left_align ? text + fill : fill + text;
}

} // namespace

std::string format_ratio(const std::optional<double>& value) {
    if (!value) return "-";
    return printf_fmt("%.2f", *value);
}

std::string format_pct(double fraction) {
    return printf_fmt("%.1f%%", fraction * 100.0);
}

nlohmann::json to_json(const metrics::MetricsReport& m) {
    return {
        {"roi", m.roi},
        {"sharpe", opt_json(m.sharpe)},
        {"sortino", opt_json(m.sortino)},
        {"mdd", m.mdd},
        {"ret_dd", opt_json(m.ret_dd)},
        {"alpha", opt_json(m.alpha)},
        {"beta", opt_json(m.beta)},
        {"vol", m.vol},
        {"turnover", m.turnover},
        {"win_rate", m.win_rate},
        {"win_positions", m.win_positions},
        {"total_positions", m.total_positions},
    };
}

metrics::MetricsReport metrics_from_json(const nlohmann::json& j) {
    metrics::MetricsReport m;
    m.roi = j.at("roi").get<double>();
    m.sharpe = opt_from(j, "sharpe");
    m.sortino = opt_from(j, "sortino");
    m.mdd = j.at("mdd").get<double>();
    m.ret_dd = opt_from(j, "ret_dd");
    m.alpha = opt_from(j, "alpha");
    m.beta = opt_from(j, "beta");
    m.vol = j.at("vol").get<double>();
    m.turnover = j.at("turnover").get<double>();
    m.win_rate = j.at("win_rate").get<double>();
    m.win_positions = j.at("win_positions").get<int>();
    m.total_positions = j.at("total_positions").get<int>();
    return m;
}

nlohmann::json to_json(const engine::BacktestConfig& config) {
    nlohmann::json alloc = {
        {"vol_window", config.alloc.vol_window},
        {"sharpe_window", config.alloc.sharpe_window},
        {"sharpe_floor", config.alloc.sharpe_floor},
    };
    nlohmann::json risk = nullptr;
    if (config.risk) {
        nlohmann::json bands = nlohmann::json::array();
        for (const auto& band : config.risk->bands) {
            bands.push_back({{"threshold", band.threshold}, {"multiplier", band.multiplier}});
        }
        risk = {{"bands", bands}, {"cooldown_days", config.risk->cooldown_days}};
    }
    return {
        {"symbols", config.symbols},
        {"start", config.start.str()},
        {"end", config.end.str()},
        {"fee_bps", config.fee_bps},
        {"alloc", alloc},
        {"risk", risk},
        {"benchmark", config.benchmark},
        {"initial_capital", config.initial_capital},
    };
}

engine::BacktestConfig config_from_json(const nlohmann::json& j) {
    engine::BacktestConfig config;
    config.symbols = j.at("symbols").get<std::vector<std::string>>();
    config.start = Date::parse(j.at("start").get<std::string>());
    config.end = Date::parse(j.at("end").get<std::string>());
    config.fee_bps = j.at("fee_bps").get<double>();
    const auto& alloc = j.at("alloc");
    config.alloc.vol_window = alloc.at("vol_window").get<int>();
    config.alloc.sharpe_window = alloc.at("sharpe_window").get<int>();
    config.alloc.sharpe_floor = alloc.at("sharpe_floor").get<double>();
    const auto& risk = j.at("risk");
    if (risk.is_null()) {
        config.risk.reset();
    } else {
        risk::RiskConfig rc;
        rc.bands.clear();
        for (const auto& band : risk.at("bands")) {
            rc.bands.push_back({band.at("threshold").get<double>(),
                                band.at("multiplier").get<double>()});
        }
        rc.cooldown_days = risk.at("cooldown_days").get<int>();
        config.risk = rc;
    }
    config.benchmark = j.at("benchmark").get<std::string>();
    config.initial_capital = j.at("initial_capital").get<double>();
    return config;
}

nlohmann::json to_json(const universe::UniverseReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        entries.push_back({
            {"symbol", e.symbol},
            {"cap_rank", e.cap_rank},
            {"vol_rank", e.vol_rank},
            {"trend", std::string(universe::to_string(e.trend))},
            {"pegged", e.pegged},
            {"admitted", e.admitted},
            {"reason", e.reason},
        });
    }
    return {{"entries", entries}, {"admitted", report.admitted()}};
}

nlohmann::json to_json(const tuner::TuneResult& result) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& entry : result.ranked) {
        const auto& p = entry.params;
        ranked.push_back({
            {"config",
             {{"thresholds", {p.threshold1, p.threshold2, p.threshold3}},
              {"multipliers", {p.multiplier1, p.multiplier2, p.multiplier3}}}},
            {"objective", opt_json(entry.objective)},
            {"metrics", to_json(entry.metrics)},
        });
    }
    return {{"objective", std::string(tuner::to_string(result.objective))}, {"ranked", ranked}};
}

std::string render_table(const engine::ComparisonTable& table) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.headers);
    for (const auto& row : table.rows) {
        const auto& m = row.metrics;
        cells.push_back({row.name, format_ratio(m.sharpe), format_ratio(m.sortino),
                         format_pct(m.roi), format_pct(m.mdd), format_ratio(m.ret_dd),
                         format_ratio(m.alpha), format_ratio(m.beta), format_pct(m.turnover)});
    }

    const std::size_t n_cols = table.headers.size();
    std::vector<std::size_t> widths(n_cols, 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }

    std::string out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c > 0) out += " | ";
            out += pad(row[c], widths[c], c == 0);
        }
        out += '\n';
    }
    return out;
}

std::string render_summary(const RunSummary& summary) {
    return render_table(engine::compare(summary.results));
}

std::string equity_csv(const metrics::EquityCurve& curve) {
    std::string out = "date,value\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out += curve.dates[i].str();
        out += ',';
        out += format_double(curve.values[i]);
        out += '\n';
    }
    return out;
}

std::string weights_csv(const std::vector<engine::WeightRow>& rows,
                        const std::vector<std::string>& symbols) {
    std::string out = "date,cash";
    for (const auto& sym : symbols) {
        out += ',';
        out += sym;
    }
    out += '\n';
    for (const auto& row : rows) {
        out += row.date.str();
        out += ',';
        out += format_double(row.cash);
        for (double w : row.weights) {
            out += ',';
            out += format_double(w);
        }
        out += '\n';
    }
    return out;
}

std::string trades_csv(const std::vector<metrics::TradeRecord>& trades) {
    std::string out = "symbol,entry_date,exit_date,realized_pnl,win\n";
    for (const auto& t : trades) {
        out += t.symbol;
        out += ',';
        out += t.entry_date.str();
        out += ',';
        out += t.exit_date.str();
        out += ',';
        out += format_double(t.realized_pnl);
        out += ',';
        out += t.win ? "1" : "0";
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw DataError("write failed for " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_run_dir(const std::filesystem::path& dir, const RunBundle& bundle) {
    std::filesystem::create_directories(dir);

    nlohmann::json results = nlohmann::json::array();
    for (const auto& [name, m] : bundle.results) {
        results.push_back({{"name", name}, {"metrics", to_json(m)}});
    }
    const nlohmann::json doc = {{"config", to_json(bundle.config)}, {"results", results}};
    write_text_file(dir / "report.json", doc.dump(2) + "\n");

    const auto table = engine::compare(bundle.results);
    write_text_file(dir / "table.txt", render_table(table));
    write_text_file(dir / "equity.csv", equity_csv(bundle.primary.equity));
    write_text_file(dir / "weights.csv",
                    weights_csv(bundle.primary.weights_history, bundle.primary.symbols));
    write_text_file(dir / "trades.csv", trades_csv(bundle.primary.trades));
}

RunSummary read_report(const std::filesystem::path& report_json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(report_json));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed report json " + report_json.string() + ": " + e.what());
    }
    try {
        RunSummary summary;
        summary.config = config_from_json(doc.at("config"));
        for (const auto& entry : doc.at("results")) {
            summary.results.emplace_back(entry.at("name").get<std::string>(),
                                         metrics_from_json(entry.at("metrics")));
        }
        return summary;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid report json " + report_json.string() + ": " + e.what());
    }
}

} // namespace folio::report
