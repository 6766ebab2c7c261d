#pragma once

#include <vector>

namespace folio::risk {

/// One drawdown band: drawdowns at or above `threshold` (and below the next
/// band's threshold) map to `multiplier` of full exposure.
struct Band {
    double threshold = 0.0;
    double multiplier = 1.0;
};

struct RiskConfig {
    // Default schedule: 2% -> 80%, 4% -> 60%, 6% -> flat.
    std::vector<Band> bands{{0.02, 0.8}, {0.04, 0.6}, {0.06, 0.0}};
    int cooldown_days = 1;

    /// Throws DataError unless thresholds are strictly increasing, multipliers
    /// strictly decreasing and within [0, 1].
    void validate() const;
};

/// Exposure state advanced once per day against closing equity.
struct RiskState {
    double high_water_mark = 1.0;
    double multiplier = 1.0;
    int cooldown_remaining = 0;
    bool liquidated = false;
};

/// max(0, (hwm - equity) / hwm); equity above the mark clamps to 0.
double drawdown(double equity, double hwm);

/// Piecewise band lookup: below the first threshold exposure is full.
double band_multiplier(double dd, const RiskConfig& config);

/// Advances the state on one closing equity observation and returns the
/// exposure multiplier to apply at the next rebalance.
///
/// A drawdown reaching the final (zero-multiplier) band liquidates and starts
/// the cooldown; the portfolio stays flat for exactly cooldown_days further
/// steps, then re-enters at full exposure with the high-water mark reset to
/// current equity. Partial-band recoveries restore exposure immediately.
double step(RiskState& state, double equity, const RiskConfig& config);

} // namespace folio::risk
