#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "folio/errors.hpp"
#include "folio/exchange_client.hpp"
#include "helpers.hpp"

using Catch::Matchers::ContainsSubstring;
using nlohmann::json;
using namespace folio;
using namespace folio::exchange;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("folio_fetch_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json bar_row(Date d, double close) {
    const double open = close * 0.99;
    return json::array({d.unix_ms(), std::to_string(open), std::to_string(close * 1.01),
                        std::to_string(open * 0.98), std::to_string(close), "12.5",
                        d.unix_ms() + 86'399'999, std::to_string(1e6 + close), 321, "6.0",
                        "480000.1", "0"});
}

std::string page_body(Date first, int n, double base_close = 100.0) {
    json page = json::array();
    for (int k = 0; k < n; ++k) {
        page.push_back(bar_row(first.plus_days(k), base_close + k));
    }
    return page.dump();
}

FetchRequest request_for(const fs::path& out, int n_days, const std::string& symbol = "SYNUSDT") {
    FetchRequest req;
    req.symbol = symbol;
    req.start = testutil::day0();
    req.end = testutil::day0().plus_days(n_days - 1);
    req.out_dir = out;
    return req;
}

FetchOptions fast_options(int page_limit = 1000, int max_retries = 5) {
    FetchOptions options;
    options.page_limit = page_limit;
    options.max_retries = max_retries;
    options.backoff_base = std::chrono::milliseconds(0);
    return options;
}

} // namespace

TEST_CASE("multi-page download walks the cursor forward") {
    auto dir = fresh_dir("pages");
    FixtureTransport transport;
    transport.push_response(200, page_body(testutil::day0(), 1000, 100.0));
    transport.push_response(200, page_body(testutil::day0().plus_days(1000), 1000, 1100.0));
    transport.push_response(200, page_body(testutil::day0().plus_days(2000), 500, 2100.0));

    auto series = fetch_klines(request_for(dir, 2500), transport, fast_options());
    REQUIRE(series.bars.size() == 2500);
    REQUIRE(series.bars.front().date == testutil::day0());
    REQUIRE(series.bars.back().date == testutil::day0().plus_days(2499));
    REQUIRE(series.bars.back().close == 2599.0);

    const auto& reqs = transport.requests();
    REQUIRE(reqs.size() == 3);
    REQUIRE(reqs[0].symbol == "SYNUSDT");
    REQUIRE(reqs[0].interval == "1d");
    REQUIRE(reqs[0].limit == 1000);
    REQUIRE(reqs[0].start_ms == testutil::day0().unix_ms());
    REQUIRE(reqs[1].start_ms == testutil::day0().plus_days(1000).unix_ms());
    REQUIRE(reqs[2].start_ms == testutil::day0().plus_days(2000).unix_ms());
    for (const auto& q : reqs) {
        REQUIRE(q.end_ms == testutil::day0().plus_days(2499).unix_ms());
    }

    // the canonical CSV round-trips through the loader
    auto loaded = load_series(dir / "SYNUSDT.csv", "SYNUSDT");
    REQUIRE(loaded.bars.size() == 2500);
    REQUIRE(to_csv(loaded) == to_csv(series));
}

TEST_CASE("a single short page completes in one request") {
    auto dir = fresh_dir("single");
    FixtureTransport transport;
    transport.push_response(200, page_body(testutil::day0(), 1));

    auto series = fetch_klines(request_for(dir, 2), transport, fast_options());
    REQUIRE(series.bars.size() == 1);
    REQUIRE(transport.requests().size() == 1);
    REQUIRE(fs::exists(dir / "SYNUSDT.csv"));
}

TEST_CASE("rate limits and server errors are retried") {
    auto dir = fresh_dir("retry");
    FixtureTransport transport;
    transport.push_response(429, "slow down");
    transport.push_response(500, "oops");
    transport.push_response(418, "teapot ban");
    transport.push_response(200, page_body(testutil::day0(), 3));

    auto series = fetch_klines(request_for(dir, 3), transport, fast_options());
    REQUIRE(series.bars.size() == 3);
    REQUIRE(transport.requests().size() == 4);
}

TEST_CASE("retries are bounded") {
    auto dir = fresh_dir("bounded");
    FixtureTransport transport;
    for (int i = 0; i < 3; ++i) transport.push_response(429, "slow down");

    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options(1000, 2)),
                        ContainsSubstring("http error 429 fetching SYNUSDT"));
    REQUIRE(transport.requests().size() == 3);  // initial try plus two retries
}

TEST_CASE("non-retryable statuses fail immediately") {
    auto dir = fresh_dir("fatal");
    FixtureTransport transport;
    transport.push_response(404, "nope");
    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                        ContainsSubstring("http error 404"));
    REQUIRE(transport.requests().size() == 1);
}

TEST_CASE("unknown symbols surface the exchange rejection") {
    auto dir = fresh_dir("unknown");
    FixtureTransport transport;
    transport.push_response(400, R"({"code":-1121,"msg":"Invalid symbol."})");
    REQUIRE_THROWS_WITH(
        fetch_klines(request_for(dir, 3, "BADUSDT"), transport, fast_options()),
        ContainsSubstring("unknown symbol: BADUSDT"));
}

TEST_CASE("transport failures exhaust into a network error") {
    auto dir = fresh_dir("network");
    FixtureTransport transport;
    for (int i = 0; i < 3; ++i) transport.push_response(0, "");
    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options(1000, 2)),
                        ContainsSubstring("network failure fetching SYNUSDT"));
}

TEST_CASE("an empty page for the whole range is an error") {
    auto dir = fresh_dir("empty");
    FixtureTransport transport;
    transport.push_response(200, "[]");
    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                        ContainsSubstring("empty response range for SYNUSDT"));
}

TEST_CASE("overlapping pages are rejected") {
    auto dir = fresh_dir("overlap");
    FixtureTransport transport;
    transport.push_response(200, page_body(testutil::day0(), 3));
    transport.push_response(200, page_body(testutil::day0().plus_days(2), 3));

    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 6), transport, fast_options(3)),
                        ContainsSubstring("overlapping kline pages"));
}

TEST_CASE("malformed payloads are named") {
    auto dir = fresh_dir("malformed");

    {
        FixtureTransport transport;
        transport.push_response(200, "{\"not\":\"klines\"}");
        REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                            ContainsSubstring("not an array"));
    }
    {
        FixtureTransport transport;
        transport.push_response(200, "[[1577836800000]]");
        REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                            ContainsSubstring("malformed kline row"));
    }
    {
        FixtureTransport transport;
        json row = bar_row(testutil::day0(), 100.0);
        row[0] = "not-a-timestamp";
        transport.push_response(200, json::array({row}).dump());
        REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                            ContainsSubstring("malformed open time"));
    }
    {
        FixtureTransport transport;
        json row = bar_row(testutil::day0(), 100.0);
        row[4] = "abc";
        transport.push_response(200, json::array({row}).dump());
        REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                            ContainsSubstring("malformed close"));
    }
    {
        FixtureTransport transport;
        json row = bar_row(testutil::day0(), 100.0);
        row[2] = "1.0";  // high far below the close
        transport.push_response(200, json::array({row}).dump());
        REQUIRE_THROWS_AS(fetch_klines(request_for(dir, 3), transport, fast_options()),
                          DataError);
    }
}

TEST_CASE("fetching twice writes identical files") {
    auto dir = fresh_dir("idempotent");
    const auto body = page_body(testutil::day0(), 10);

    for (int round = 0; round < 2; ++round) {
        FixtureTransport transport;
        transport.push_response(200, body);
        fetch_klines(request_for(dir, 10), transport, fast_options());
        std::ifstream in(dir / "SYNUSDT.csv", std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        static std::string first;
        if (round == 0) {
            first = bytes;
        } else {
            REQUIRE(bytes == first);
        }
    }
}

TEST_CASE("request validation") {
    auto dir = fresh_dir("validation");
    FixtureTransport transport;

    auto backwards = request_for(dir, 3);
    backwards.end = backwards.start;
    REQUIRE_THROWS_WITH(fetch_klines(backwards, transport, fast_options()),
                        ContainsSubstring("start must precede end"));

    auto anonymous = request_for(dir, 3, "");
    REQUIRE_THROWS_WITH(fetch_klines(anonymous, transport, fast_options()),
                        ContainsSubstring("empty symbol"));

    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options(0)),
                        ContainsSubstring("invalid fetch options"));

    REQUIRE_THROWS_WITH(fetch_klines(request_for(dir, 3), transport, fast_options()),
                        ContainsSubstring("fixture transport exhausted"));
}

TEST_CASE("quote volume lands in the volume column") {
    auto dir = fresh_dir("volume");
    FixtureTransport transport;
    transport.push_response(200, page_body(testutil::day0(), 1, 250.0));
    auto series = fetch_klines(request_for(dir, 2), transport, fast_options());
    REQUIRE(series.bars[0].volume == Catch::Approx(1e6 + 250.0).margin(1e-3));
    REQUIRE(series.bars[0].close == Catch::Approx(250.0).margin(1e-9));
}
