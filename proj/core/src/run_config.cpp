#include "folio/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "folio/errors.hpp"

namespace folio {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::vector<std::string>& known,
                    const std::string& scope) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw DataError("unknown config key: " + scope + key);
        }
    }
}

alloc::AllocConfig parse_alloc(const nlohmann::json& j) {
    reject_unknown(j, {"vol_window", "sharpe_window", "sharpe_floor"}, "alloc.");
    alloc::AllocConfig out;
    if (j.contains("vol_window")) out.vol_window = j.at("vol_window").get<int>();
    if (j.contains("sharpe_window")) out.sharpe_window = j.at("sharpe_window").get<int>();
    if (j.contains("sharpe_floor")) out.sharpe_floor = j.at("sharpe_floor").get<double>();
    if (out.vol_window < 2 || out.sharpe_window < 2) {
        throw DataError("alloc windows must be >= 2");
    }
    return out;
}

std::optional<risk::RiskConfig> parse_risk(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "off") return std::nullopt;
        throw DataError("risk must be an object or \"off\"");
    }
    reject_unknown(j, {"bands", "cooldown_days"}, "risk.");
    risk::RiskConfig out;
    if (j.contains("bands")) {
        out.bands.clear();
        for (const auto& band : j.at("bands")) {
            reject_unknown(band, {"threshold", "multiplier"}, "risk.bands.");
            out.bands.push_back({band.at("threshold").get<double>(),
                                 band.at("multiplier").get<double>()});
        }
    }
    if (j.contains("cooldown_days")) out.cooldown_days = j.at("cooldown_days").get<int>();
    out.validate();
    return out;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot read config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed config " + path.string() + ": " + e.what());
    }

    reject_unknown(j,
                   {"data_dir", "meta_file", "universe", "include_list", "top_n",
                    "trend_window", "start", "end", "fee_bps", "alloc", "risk", "benchmark",
                    "baselines", "out_dir", "initial_capital"},
                   "");

    RunConfig config;
    try {
        if (!j.contains("data_dir")) throw DataError("config missing data_dir");
        config.data_dir = j.at("data_dir").get<std::string>();
        if (j.contains("meta_file")) config.meta_file = j.at("meta_file").get<std::string>();

        if (!j.contains("universe")) throw DataError("config missing universe");
        const auto& universe = j.at("universe");
        if (universe.is_string()) {
            if (universe.get<std::string>() != "auto") {
                throw DataError("universe must be a symbol list or \"auto\"");
            }
            config.auto_universe = true;
        } else {
            config.symbols = universe.get<std::vector<std::string>>();
            if (config.symbols.empty()) throw DataError("universe list is empty");
        }
        if (j.contains("include_list")) {
            config.include_list = j.at("include_list").get<std::vector<std::string>>();
        }
        if (j.contains("top_n")) config.top_n = j.at("top_n").get<int>();
        if (j.contains("trend_window")) config.trend_window = j.at("trend_window").get<int>();

        if (!j.contains("start") || !j.contains("end")) {
            throw DataError("config missing start or end");
        }
        config.start = Date::parse(j.at("start").get<std::string>());
        config.end = Date::parse(j.at("end").get<std::string>());

        if (j.contains("fee_bps")) config.fee_bps = j.at("fee_bps").get<double>();
        if (j.contains("alloc")) config.alloc = parse_alloc(j.at("alloc"));
        if (j.contains("risk")) config.risk = parse_risk(j.at("risk"));
        if (j.contains("benchmark")) config.benchmark = j.at("benchmark").get<std::string>();
        if (j.contains("baselines")) {
            config.baselines = j.at("baselines").get<std::vector<std::string>>();
        }
        if (j.contains("out_dir")) config.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("initial_capital")) {
            config.initial_capital = j.at("initial_capital").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid config " + path.string() + ": " + e.what());
    }

    if (!std::filesystem::is_directory(config.data_dir)) {
        throw DataError("data_dir does not exist: " + config.data_dir.string());
    }
    if (config.auto_universe && config.meta_file.empty()) {
        throw DataError("auto universe requires meta_file");
    }
    if (!config.meta_file.empty() && !std::filesystem::is_regular_file(config.meta_file)) {
        throw DataError("meta_file does not exist: " + config.meta_file.string());
    }
    for (const auto& name : config.baselines) {
        if (name != "buy_and_hold" && name != "equal_weight_daily" &&
            name.rfind("asset:", 0) != 0) {
            throw DataError("unknown baseline: " + name);
        }
    }
    return config;
}

} // namespace folio
