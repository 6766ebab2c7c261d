#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "folio/engine.hpp"
#include "folio/errors.hpp"
#include "folio/exchange_client.hpp"
#include "folio/report.hpp"
#include "folio/run_config.hpp"
#include "folio/tuner.hpp"
#include "folio/universe.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool offline = false;
};

folio::AlignedPanel load_panel(const folio::RunConfig& config,
                               const std::vector<std::string>& symbols) {
    std::vector<folio::PriceSeries> series;
    series.reserve(symbols.size());
    for (const auto& sym : symbols) {
        series.push_back(folio::load_series(config.data_dir / (sym + ".csv"), sym));
    }
    return folio::align(series);
}

std::vector<std::string> data_dir_symbols(const fs::path& data_dir) {
    std::vector<std::string> symbols;
    for (const auto& entry : fs::directory_iterator(data_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            symbols.push_back(entry.path().stem().string());
        }
    }
    std::sort(symbols.begin(), symbols.end());
    if (symbols.empty()) {
        throw folio::DataError("no CSV files in " + data_dir.string());
    }
    return symbols;
}

folio::universe::UniverseReport run_universe_selection(const folio::RunConfig& config) {
    const auto metas = folio::universe::load_meta_csv(config.meta_file);
    const auto panel = load_panel(config, data_dir_symbols(config.data_dir));
    folio::universe::ScreenConfig screen;
    screen.top_n = config.top_n;
    screen.include_list = config.include_list;
    screen.window = config.trend_window;
    return folio::universe::select_universe(metas, panel, screen);
}

std::vector<std::string> resolve_symbols(const folio::RunConfig& config) {
    if (!config.auto_universe) return config.symbols;
    const auto report = run_universe_selection(config);
    auto admitted = report.admitted();
    if (admitted.empty()) {
        throw folio::DataError("universe selection admitted no symbols");
    }
    return admitted;
}

folio::engine::BacktestConfig to_engine_config(const folio::RunConfig& config,
                                               std::vector<std::string> symbols) {
    folio::engine::BacktestConfig out;
    out.symbols = std::move(symbols);
    out.start = config.start;
    out.end = config.end;
    out.fee_bps = config.fee_bps;
    out.alloc = config.alloc;
    out.risk = config.risk;
    out.benchmark = config.benchmark;
    out.initial_capital = config.initial_capital;
    return out;
}

fs::path resolved_out_dir(const GlobalOpts& opts, const folio::RunConfig& config) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    return config.out_dir;
}

int cmd_synth(const GlobalOpts& opts, const std::string& scenario, int assets, int days) {
    if (opts.out_dir.empty()) {
        throw CLI::ValidationError("--out", "synth requires an output directory");
    }
    folio::SynthSpec spec;
    spec.scenario = folio::parse_scenario(scenario);
    spec.n_assets = assets;
    spec.n_days = days;
    spec.seed = opts.seed;
    const auto series_list = folio::synth_series(spec);
    fs::create_directories(opts.out_dir);
    for (const auto& series : series_list) {
        folio::write_csv(series, fs::path(opts.out_dir) / (series.symbol + ".csv"));
    }
    std::cout << "wrote " << series_list.size() << " series to " << opts.out_dir << "\n";
    return 0;
}

int cmd_fetch(const GlobalOpts& opts, const std::vector<std::string>& symbols,
              const std::string& start, const std::string& end, const std::string& fixtures,
              const std::string& base_url) {
    if (opts.out_dir.empty()) {
        throw CLI::ValidationError("--out", "fetch requires an output directory");
    }
    folio::exchange::FetchRequest request;
    request.start = folio::Date::parse(start);
    request.end = folio::Date::parse(end);
    request.out_dir = opts.out_dir;
    for (const auto& sym : symbols) {
        request.symbol = sym;
        std::unique_ptr<folio::exchange::KlineTransport> transport;
        folio::exchange::FetchOptions options;
        if (opts.offline) {
            const fs::path fixture_file = fs::path(fixtures) / (sym + ".json");
            if (fixtures.empty() || !fs::exists(fixture_file)) {
                throw folio::DataError("offline mode, no fixture for " + sym);
            }
            auto scripted = std::make_unique<folio::exchange::FixtureTransport>();
            const auto pages =
                nlohmann::json::parse(folio::report::read_text_file(fixture_file));
            if (!pages.is_array()) {
                throw folio::DataError("fixture for " + sym + " must be an array of pages");
            }
            for (const auto& page : pages) {
                scripted->push_response(200, page.dump());
            }
            options.backoff_base = std::chrono::milliseconds(0);
            transport = std::move(scripted);
        } else {
            transport = folio::exchange::make_http_transport(base_url);
        }
        const auto series = folio::exchange::fetch_klines(request, *transport, options);
        std::cout << sym << ": " << series.bars.size() << " bars\n";
    }
    return 0;
}

int cmd_universe(const GlobalOpts& opts) {
    const auto config = folio::load_run_config(opts.config_path);
    const auto report = run_universe_selection(config);
    const auto doc = folio::report::to_json(report);
    std::cout << doc.dump(2) << "\n";
    const fs::path out_dir = resolved_out_dir(opts, config);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        folio::report::write_text_file(out_dir / "universe.json", doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_backtest(const GlobalOpts& opts) {
    const auto config = folio::load_run_config(opts.config_path);
    const auto symbols = resolve_symbols(config);
    const auto panel = load_panel(config, symbols);
    const auto engine_config = to_engine_config(config, symbols);

    folio::report::RunBundle bundle;
    bundle.primary = folio::engine::run_backtest(panel, engine_config);
    bundle.config = bundle.primary.config_echo;
    bundle.results.emplace_back("hybrid", bundle.primary.metrics);
    for (const auto& name : config.baselines) {
        if (name == "buy_and_hold") {
            const auto run = folio::engine::run_baseline(panel, engine_config,
                                                         folio::engine::BaselineKind::BuyAndHold);
            bundle.results.emplace_back("buy_and_hold", run.metrics);
        } else if (name == "equal_weight_daily") {
            const auto run = folio::engine::run_baseline(
                panel, engine_config, folio::engine::BaselineKind::EqualWeightDaily);
            bundle.results.emplace_back("equal_weight", run.metrics);
        } else {
            const std::string sym = name.substr(std::string("asset:").size());
            const auto run = folio::engine::run_baseline(
                panel, engine_config, folio::engine::BaselineKind::SingleAsset, sym);
            bundle.results.emplace_back(sym + " only", run.metrics);
        }
    }

    const fs::path out_dir = resolved_out_dir(opts, config);
    folio::report::write_run_dir(out_dir, bundle);
    std::cout << folio::report::render_table(folio::engine::compare(bundle.results));
    return 0;
}

folio::tuner::GridSpec load_grid_spec(const fs::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(folio::report::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw folio::DataError("malformed grid " + path.string() + ": " + e.what());
    }
    folio::tuner::GridSpec grid;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "threshold1") grid.threshold1 = value.get<std::vector<double>>();
            else if (key == "threshold2") grid.threshold2 = value.get<std::vector<double>>();
            else if (key == "threshold3") grid.threshold3 = value.get<std::vector<double>>();
            else if (key == "multiplier1") grid.multiplier1 = value.get<std::vector<double>>();
            else if (key == "multiplier2") grid.multiplier2 = value.get<std::vector<double>>();
            else if (key == "multiplier3") grid.multiplier3 = value.get<std::vector<double>>();
            else if (key == "objective") {
                grid.objective = folio::tuner::parse_objective(value.get<std::string>());
            } else {
                throw folio::DataError("unknown grid key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw folio::DataError("invalid grid " + path.string() + ": " + e.what());
    }
    return grid;
}

std::string render_tune_top(const folio::tuner::TuneResult& result, std::size_t top_k) {
    std::string out = "rank | thresholds | multipliers | " +
                      std::string(folio::tuner::to_string(result.objective)) + "\n";
    const std::size_t n = std::min(top_k, result.ranked.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = result.ranked[i];
        const auto& p = entry.params;
        char buf[160];
        std::optional<double> obj = entry.objective;
        std::snprintf(buf, sizeof(buf), "%4zu | %.4f %.4f %.4f | %.2f %.2f %.2f | %s\n", i + 1,
                      p.threshold1, p.threshold2, p.threshold3, p.multiplier1, p.multiplier2,
                      p.multiplier3, folio::report::format_ratio(obj).c_str());
        out += buf;
    }
    return out;
}

int cmd_tune(const GlobalOpts& opts, const std::string& grid_path, int threads,
             int random_trials) {
    const auto config = folio::load_run_config(opts.config_path);
    const auto symbols = resolve_symbols(config);
    const auto panel = load_panel(config, symbols);
    const auto engine_config = to_engine_config(config, symbols);
    const auto grid = load_grid_spec(grid_path);

    folio::tuner::TuneResult result;
    if (random_trials > 0) {
        folio::tuner::Bounds bounds;
        auto span = [](const std::vector<double>& xs) -> std::array<double, 2> {
            const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
            return {*lo, *hi};
        };
        bounds.threshold1 = span(grid.threshold1);
        bounds.threshold2 = span(grid.threshold2);
        bounds.threshold3 = span(grid.threshold3);
        bounds.multiplier1 = span(grid.multiplier1);
        bounds.multiplier2 = span(grid.multiplier2);
        bounds.multiplier3 = span(grid.multiplier3);
        bounds.objective = grid.objective;
        result = folio::tuner::random_search(panel, engine_config, bounds, random_trials,
                                             opts.seed, threads);
    } else {
        result = folio::tuner::grid_search(panel, engine_config, grid, threads);
    }

    const fs::path out_dir = resolved_out_dir(opts, config);
    fs::create_directories(out_dir);
    folio::report::write_text_file(out_dir / "tune.json",
                                   folio::report::to_json(result).dump(2) + "\n");
    std::cout << render_tune_top(result, 5);
    return 0;
}

int cmd_report(const GlobalOpts& opts) {
    if (opts.out_dir.empty()) {
        throw CLI::ValidationError("--out", "report requires the run directory");
    }
    const fs::path dir = opts.out_dir;
    const auto summary = folio::report::read_report(dir / "report.json");
    const std::string table = folio::report::render_summary(summary);
    folio::report::write_text_file(dir / "table.txt", table);
    std::cout << table;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Portfolio allocation backtester"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "Run configuration JSON");
    app.add_option("--out", opts.out_dir, "Output directory");
    app.add_option("--seed", opts.seed, "Deterministic seed");
    app.add_flag("--offline", opts.offline, "Never touch the network; fixtures only");

    auto* synth = app.add_subcommand("synth", "Generate synthetic daily price CSVs");
    std::string scenario = "bull";
    int assets = 1;
    int days = 365;
    synth->add_option("--scenario", scenario, "bull, crash, sideways or regime_switch");
    synth->add_option("--assets", assets, "Number of assets");
    synth->add_option("--days", days, "Number of daily bars");

    auto* fetch = app.add_subcommand("fetch", "Download daily klines to CSV");
    std::vector<std::string> fetch_symbols;
    std::string fetch_start;
    std::string fetch_end;
    std::string fixtures;
    std::string base_url = "https://api.binance.com";
    fetch->add_option("--symbols", fetch_symbols, "Exchange pairs, e.g. BTCUSDT")
        ->required()
        ->delimiter(',');
    fetch->add_option("--start", fetch_start, "First day (YYYY-MM-DD)")->required();
    fetch->add_option("--end", fetch_end, "Last day (YYYY-MM-DD)")->required();
    fetch->add_option("--fixtures", fixtures, "Directory of recorded response pages");
    fetch->add_option("--base-url", base_url, "Endpoint base URL");

    auto* universe_cmd = app.add_subcommand("universe", "Screen and classify the asset universe");
    auto* backtest = app.add_subcommand("backtest", "Run the strategy and baselines");
    auto* tune = app.add_subcommand("tune", "Search risk schedules");
    std::string grid_path;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    int random_trials = 0;
    tune->add_option("--grid", grid_path, "Grid JSON file")->required();
    tune->add_option("--threads", threads, "Worker threads");
    tune->add_option("--random-trials", random_trials,
                     "Sample this many configs from the grid's ranges instead");
    auto* report_cmd = app.add_subcommand("report", "Re-render an existing run directory");

    auto need_config = [&opts](const char* cmd) {
        if (opts.config_path.empty()) {
            throw CLI::ValidationError("--config",
                                       std::string(cmd) + " requires a configuration file");
        }
    };
    universe_cmd->callback([&] {
        need_config("universe");
        cmd_universe(opts);
    });
    backtest->callback([&] {
        need_config("backtest");
        cmd_backtest(opts);
    });
    tune->callback([&] {
        need_config("tune");
        cmd_tune(opts, grid_path, threads, random_trials);
    });
    report_cmd->callback([&] { cmd_report(opts); });
    synth->callback([&] { cmd_synth(opts, scenario, assets, days); });
    fetch->callback(
        [&] { cmd_fetch(opts, fetch_symbols, fetch_start, fetch_end, fixtures, base_url); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 1;
    } catch (const folio::NumericError& e) {
        std::cerr << "error[numeric]: " << e.what() << "\n";
        return 3;
    } catch (const folio::DataError& e) {
        std::cerr << "error[data]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
