#include "folio/risk.hpp"

#include <algorithm>

#include "folio/errors.hpp"

namespace folio::risk {

void RiskConfig::validate() const {
    if (bands.empty()) {
        throw DataError("risk config needs at least one band");
    }
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].multiplier < 0.0 || bands[i].multiplier > 1.0) {
            throw DataError("band multiplier outside [0, 1]");
        }
        if (bands[i].threshold <= 0.0) {
            throw DataError("band threshold must be positive");
        }
        if (i > 0) {
            if (bands[i].threshold <= bands[i - 1].threshold) {
                throw DataError("band thresholds must be strictly increasing");
            }
            if (bands[i].multiplier >= bands[i - 1].multiplier) {
                throw DataError("band multipliers must be strictly decreasing");
            }
        }
    }
    if (cooldown_days < 0) {
        throw DataError("cooldown_days must be >= 0");
    }
}

double drawdown(double equity, double hwm) {
    if (hwm <= 0.0) {
        throw DataError("high-water mark must be positive");
    }
    return std::max(0.0, (hwm - equity) / hwm);
}

double band_multiplier(double dd, const RiskConfig& config) {
    double m = 1.0;
    for (const auto& band : config.bands) {
        if (dd >= band.threshold) {
            m = band.multiplier;
        } else {
            break;
        }
    }
    return m;
}

double step(RiskState& state, double equity, const RiskConfig& config) {
    if (state.liquidated) {
        if (state.cooldown_remaining > 0) {
            --state.cooldown_remaining;
            state.multiplier = 0.0;
        } else {
            // Re-entry: measuring against the old peak would keep the
            // portfolio flat forever, so the mark restarts at current equity.
            state.liquidated = false;
            state.high_water_mark = equity;
            state.multiplier = 1.0;
        }
        return state.multiplier;
    }

    state.high_water_mark = std::max(state.high_water_mark, equity);
    const double dd = drawdown(equity, state.high_water_mark);
    const double target = band_multiplier(dd, config);
    if (target == 0.0) {
        state.liquidated = true;
        state.cooldown_remaining = config.cooldown_days;
        state.multiplier = 0.0;
    } else {
        state.multiplier = target;
    }
    return state.multiplier;
}

} // namespace folio::risk
