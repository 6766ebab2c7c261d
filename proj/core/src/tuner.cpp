#include "folio/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "folio/errors.hpp"

namespace folio::tuner {

namespace {

constexpr int kMaxRejections = 100000;

std::optional<double> objective_value(Objective objective, const metrics::MetricsReport& m) {
    switch (objective) {
        case Objective::Sharpe: return m.sharpe;
        case Objective::MddMin: return m.mdd;
        case Objective::RetDd: return m.ret_dd;
        case Objective::Roi: return m.roi;
    }
    throw DataError("unknown objective");
}

bool entry_before(const TuneEntry& a, const TuneEntry& b, Objective objective) {
    if (a.objective.has_value() != b.objective.has_value()) {
        return a.objective.has_value();  // defined objectives rank above absent ones
    }
    if (a.objective && *a.objective != *b.objective) {
        if (objective == Objective::MddMin) return *a.objective < *b.objective;
        return *a.objective > *b.objective;
    }
    return a.params.as_tuple() < b.params.as_tuple();
}

TuneResult evaluate_all(const AlignedPanel& panel, const engine::BacktestConfig& base_config,
                        const std::vector<ParamSet>& candidates, Objective objective,
                        int n_threads) {
    if (n_threads < 1) {
        throw DataError("n_threads must be >= 1");
    }
    const int cooldown = base_config.risk ? base_config.risk->cooldown_days
                                          : risk::RiskConfig{}.cooldown_days;
    std::vector<TuneEntry> entries(candidates.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= candidates.size() || failed.load()) return;
            try {
                engine::BacktestConfig config = base_config;
                config.risk = candidates[i].to_risk(cooldown);
                const auto report = engine::run_backtest(panel, config);
                entries[i] = {candidates[i], objective_value(objective, report.metrics),
                              report.metrics};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) {
        std::rethrow_exception(first_error);
    }

    std::sort(entries.begin(), entries.end(),
              [objective](const TuneEntry& a, const TuneEntry& b) {
                  return entry_before(a, b, objective);
              });
    return {objective, std::move(entries)};
}

std::vector<double> sorted_unique(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

} // namespace

Objective parse_objective(std::string_view name) {
    if (name == "sharpe") return Objective::Sharpe;
    if (name == "mdd_min") return Objective::MddMin;
    if (name == "ret_dd") return Objective::RetDd;
    if (name == "roi") return Objective::Roi;
    throw DataError("invalid objective: " + std::string(name));
}

std::string_view to_string(Objective objective) {
    switch (objective) {
        case Objective::Sharpe: return "sharpe";
        case Objective::MddMin: return "mdd_min";
        case Objective::RetDd: return "ret_dd";
        case Objective::Roi: return "roi";
    }
    throw DataError("unknown objective");
}

risk::RiskConfig ParamSet::to_risk(int cooldown_days) const {
    risk::RiskConfig config;
    config.bands = {{threshold1, multiplier1}, {threshold2, multiplier2},
                    {threshold3, multiplier3}};
    config.cooldown_days = cooldown_days;
    return config;
}

bool ParamSet::admissible() const {
    try {
        to_risk(1).validate();
    } catch (const DataError&) {
        return false;
    }
    return true;
}

const TuneEntry& TuneResult::best() const {
    if (ranked.empty()) {
        throw DataError("empty tune result");
    }
    return ranked.front();
}

TuneResult grid_search(const AlignedPanel& panel, const engine::BacktestConfig& base_config,
                       const GridSpec& grid, int n_threads) {
    const auto t1s = sorted_unique(grid.threshold1);
    const auto t2s = sorted_unique(grid.threshold2);
    const auto t3s = sorted_unique(grid.threshold3);
    const auto m1s = sorted_unique(grid.multiplier1);
    const auto m2s = sorted_unique(grid.multiplier2);
    const auto m3s = sorted_unique(grid.multiplier3);

    std::vector<ParamSet> candidates;
    for (double t1 : t1s)
        for (double t2 : t2s)
            for (double t3 : t3s)
                for (double m1 : m1s)
                    for (double m2 : m2s)
                        for (double m3 : m3s) {
                            const ParamSet p{t1, t2, t3, m1, m2, m3};
                            if (p.admissible()) candidates.push_back(p);
                        }
    if (candidates.empty()) {
        throw DataError("no admissible grid points");
    }
    return evaluate_all(panel, base_config, candidates, grid.objective, n_threads);
}

TuneResult random_search(const AlignedPanel& panel, const engine::BacktestConfig& base_config,
                         const Bounds& bounds, int n_trials, std::uint64_t seed,
                         int n_threads) {
    if (n_trials < 1) {
        throw DataError("n_trials must be >= 1");
    }
    std::mt19937_64 rng(seed);
    auto draw = [&rng](const std::array<double, 2>& range) {
        if (range[0] > range[1]) {
            throw DataError("invalid bounds: lower above upper");
        }
        if (range[0] == range[1]) return range[0];
        return std::uniform_real_distribution<double>(range[0], range[1])(rng);
    };

    std::vector<ParamSet> candidates;
    candidates.reserve(static_cast<std::size_t>(n_trials));
    int rejections = 0;
    while (candidates.size() < static_cast<std::size_t>(n_trials)) {
        ParamSet p;
        p.threshold1 = draw(bounds.threshold1);
        p.threshold2 = draw(bounds.threshold2);
        p.threshold3 = draw(bounds.threshold3);
        p.multiplier1 = draw(bounds.multiplier1);
        p.multiplier2 = draw(bounds.multiplier2);
        p.multiplier3 = draw(bounds.multiplier3);
        if (p.admissible()) {
            candidates.push_back(p);
        } else if (++rejections > kMaxRejections) {
            throw DataError("bounds admit no valid configuration");
        }
    }
    return evaluate_all(panel, base_config, candidates, bounds.objective, n_threads);
}

} // namespace folio::tuner
