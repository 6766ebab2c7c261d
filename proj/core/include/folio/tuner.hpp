#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "folio/engine.hpp"

namespace folio::tuner {

enum class Objective { Sharpe, MddMin, RetDd, Roi };

/// Accepts "sharpe", "mdd_min", "ret_dd", "roi"; throws DataError otherwise.
Objective parse_objective(std::string_view name);
std::string_view to_string(Objective objective);

/// One candidate risk schedule: three drawdown thresholds with their
/// exposure multipliers.
struct ParamSet {
    double threshold1 = 0.02;
    double threshold2 = 0.04;
    double threshold3 = 0.06;
    double multiplier1 = 0.8;
    double multiplier2 = 0.6;
    double multiplier3 = 0.0;

    std::array<double, 6> as_tuple() const {
        return {threshold1, threshold2, threshold3, multiplier1, multiplier2, multiplier3};
    }
    risk::RiskConfig to_risk(int cooldown_days) const;
    bool admissible() const;
};

/// Candidate values per parameter; the search walks the cartesian product
/// and keeps the admissible points (thresholds strictly increasing,
/// multipliers strictly decreasing within [0, 1]).
struct GridSpec {
    std::vector<double> threshold1{0.02};
    std::vector<double> threshold2{0.04};
    std::vector<double> threshold3{0.06};
    std::vector<double> multiplier1{0.8};
    std::vector<double> multiplier2{0.6};
    std::vector<double> multiplier3{0.0};
    Objective objective = Objective::RetDd;
};

/// Uniform sampling ranges for random_search, same admissibility rule.
struct Bounds {
    std::array<double, 2> threshold1{0.005, 0.03};
    std::array<double, 2> threshold2{0.02, 0.06};
    std::array<double, 2> threshold3{0.04, 0.12};
    std::array<double, 2> multiplier1{0.5, 0.9};
    std::array<double, 2> multiplier2{0.2, 0.7};
    std::array<double, 2> multiplier3{0.0, 0.0};
    Objective objective = Objective::RetDd;
};

struct TuneEntry {
    ParamSet params;
    std::optional<double> objective;  // absent when undefined on the run
    metrics::MetricsReport metrics;
};

/// Entries ranked best-first by the objective (descending, or ascending for
/// mdd_min), ties and absent objectives ordered by the parameter tuple.
struct TuneResult {
    Objective objective = Objective::RetDd;
    std::vector<TuneEntry> ranked;

    const TuneEntry& best() const;
};

/// Backtests every admissible grid point with base_config's risk schedule
/// replaced by the candidate. Trials run on n_threads workers; the ranking
/// is identical at any thread count. Throws DataError when no point is
/// admissible.
TuneResult grid_search(const AlignedPanel& panel, const engine::BacktestConfig& base_config,
                       const GridSpec& grid, int n_threads = 1);

/// n_trials candidates drawn uniformly from bounds, inadmissible draws
/// rejected and redrawn; deterministic per seed. Throws DataError when the
/// bounds cannot produce an admissible candidate.
TuneResult random_search(const AlignedPanel& panel, const engine::BacktestConfig& base_config,
                         const Bounds& bounds, int n_trials, std::uint64_t seed,
                         int n_threads = 1);

} // namespace folio::tuner
