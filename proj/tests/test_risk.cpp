#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "folio/errors.hpp"
#include "folio/risk.hpp"

using Catch::Approx;
using namespace folio;
using namespace folio::risk;

TEST_CASE("config validation") {
    REQUIRE_NOTHROW(RiskConfig{}.validate());

    RiskConfig empty;
    empty.bands.clear();
    REQUIRE_THROWS_AS(empty.validate(), DataError);

    RiskConfig unordered;
    unordered.bands = {{0.04, 0.8}, {0.02, 0.6}, {0.06, 0.0}};
    REQUIRE_THROWS_AS(unordered.validate(), DataError);

    RiskConfig rising;
    rising.bands = {{0.02, 0.5}, {0.04, 0.7}};
    REQUIRE_THROWS_AS(rising.validate(), DataError);

    RiskConfig out_of_range;
    out_of_range.bands = {{0.02, 1.2}};
    REQUIRE_THROWS_AS(out_of_range.validate(), DataError);

    RiskConfig zero_threshold;
    zero_threshold.bands = {{0.0, 0.8}};
    REQUIRE_THROWS_AS(zero_threshold.validate(), DataError);

    RiskConfig bad_cooldown;
    bad_cooldown.cooldown_days = -1;
    REQUIRE_THROWS_AS(bad_cooldown.validate(), DataError);
}

TEST_CASE("drawdown") {
    REQUIRE(drawdown(100.0, 100.0) == 0.0);
    REQUIRE(drawdown(97.0, 100.0) == Approx(0.03).margin(1e-15));
    REQUIRE(drawdown(120.0, 100.0) == 0.0);
    REQUIRE_THROWS_AS(drawdown(1.0, 0.0), DataError);
}

TEST_CASE("band lookup over the default schedule") {
    RiskConfig config;
    const std::vector<double> probes{0.0, 0.019, 0.02, 0.039, 0.04, 0.059, 0.06, 0.2};
    const std::vector<double> expected{1.0, 1.0, 0.8, 0.8, 0.6, 0.6, 0.0, 0.0};
    for (std::size_t i = 0; i < probes.size(); ++i) {
        REQUIRE(band_multiplier(probes[i], config) == expected[i]);
    }
}

TEST_CASE("band lookup with a single wide band is the identity") {
    RiskConfig config;
    config.bands = {{1e18, 1.0}};
    RiskState state;
    state.high_water_mark = 100.0;
    for (double equity : {100.0, 50.0, 10.0, 200.0}) {
        REQUIRE(step(state, equity, config) == 1.0);
    }
}

TEST_CASE("partial drawdowns scale exposure and recover immediately") {
    RiskConfig config;
    RiskState state;
    state.high_water_mark = 100.0;

    REQUIRE(step(state, 100.0, config) == 1.0);
    REQUIRE(step(state, 97.0, config) == 0.8);   // dd 3%
    REQUIRE(step(state, 95.5, config) == 0.6);   // dd 4.5%
    REQUIRE(step(state, 99.5, config) == 1.0);   // dd 0.5%, instant recovery
    REQUIRE(state.high_water_mark == 100.0);
    REQUIRE(step(state, 105.0, config) == 1.0);  // new peak
    REQUIRE(state.high_water_mark == 105.0);
}

TEST_CASE("liquidation, cooldown, and re-entry") {
    RiskConfig config;  // cooldown_days = 1
    RiskState state;
    state.high_water_mark = 100.0;

    REQUIRE(step(state, 93.0, config) == 0.0);  // dd 7% -> flat
    REQUIRE(state.liquidated);
    REQUIRE(step(state, 93.0, config) == 0.0);  // the one cooldown day
    REQUIRE(step(state, 93.0, config) == 1.0);  // re-entry
    REQUIRE_FALSE(state.liquidated);
    REQUIRE(state.high_water_mark == 93.0);     // mark reset at re-entry

    // a fresh 7% slide from the new mark liquidates again
    REQUIRE(step(state, 86.49, config) == 0.0);
}

TEST_CASE("cooldown length is exactly cooldown_days") {
    for (int cooldown : {0, 1, 2, 3, 5}) {
        RiskConfig config;
        config.cooldown_days = cooldown;
        RiskState state;
        state.high_water_mark = 100.0;

        REQUIRE(step(state, 90.0, config) == 0.0);
        for (int k = 0; k < cooldown; ++k) {
            REQUIRE(step(state, 90.0, config) == 0.0);
        }
        REQUIRE(step(state, 90.0, config) == 1.0);
        REQUIRE(state.high_water_mark == 90.0);
    }
}

TEST_CASE("rising equity never cuts exposure") {
    RiskConfig config;
    RiskState state;
    state.high_water_mark = 1.0;
    double equity = 1.0;
    for (int t = 0; t < 50; ++t) {
        equity *= 1.01;
        REQUIRE(step(state, equity, config) == 1.0);
        REQUIRE(state.high_water_mark == equity);
    }
}

TEST_CASE("deeper drawdown never increases the multiplier") {
    RiskConfig config;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    for (int trial = 0; trial < 1000; ++trial) {
        double a = u(rng);
        double b = u(rng);
        if (a > b) std::swap(a, b);
        REQUIRE(band_multiplier(a, config) >= band_multiplier(b, config));
    }
}

TEST_CASE("fuzzed paths keep the state machine honest") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> shock(0.0, 0.025);
    std::uniform_int_distribution<int> cooldown_pick(0, 3);

    for (int trial = 0; trial < 1000; ++trial) {
        RiskConfig config;
        config.cooldown_days = cooldown_pick(rng);
        RiskState state;
        double equity = 1.0;
        state.high_water_mark = equity;

        double hwm = equity;
        bool flat = false;
        int cooldown_left = 0;

        for (int t = 0; t < 60; ++t) {
            equity *= std::exp(shock(rng));
            const double m = step(state, equity, config);

            // shadow transcript of the documented rules
            double expected;
            if (flat) {
                if (cooldown_left > 0) {
                    --cooldown_left;
                    expected = 0.0;
                } else {
                    flat = false;
                    hwm = equity;
                    expected = 1.0;
                }
            } else {
                hwm = std::max(hwm, equity);
                const double dd = (hwm - equity) / hwm;
                expected = band_multiplier(dd, config);
                if (expected == 0.0) {
                    flat = true;
                    cooldown_left = config.cooldown_days;
                }
            }
            REQUIRE(m == expected);
            REQUIRE(state.high_water_mark == hwm);
        }
    }
}
