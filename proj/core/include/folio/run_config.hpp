#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "folio/allocation.hpp"
#include "folio/date.hpp"
#include "folio/risk.hpp"

namespace folio {

/// Parsed run configuration for the backtest/universe/tune commands.
/// Loaded from a single JSON document; unknown keys are hard errors and
/// every referenced file must exist at load time.
struct RunConfig {
    std::filesystem::path data_dir;
    std::filesystem::path meta_file;  // required when auto_universe
    bool auto_universe = false;
    std::vector<std::string> symbols;  // explicit universe when not auto
    std::vector<std::string> include_list;
    int top_n = 10;
    int trend_window = 90;
    Date start;
    Date end;
    double fee_bps = 4.0;
    alloc::AllocConfig alloc;
    std::optional<risk::RiskConfig> risk = risk::RiskConfig{};  // "off" -> nullopt
    std::string benchmark = "equal_weight";
    // "buy_and_hold", "equal_weight_daily", or "asset:<SYMBOL>".
    std::vector<std::string> baselines{"buy_and_hold", "equal_weight_daily"};
    std::filesystem::path out_dir = "out";
    double initial_capital = 1.0;
};

RunConfig load_run_config(const std::filesystem::path& path);

} // namespace folio
