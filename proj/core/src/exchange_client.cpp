#include "folio/exchange_client.hpp"

#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "folio/errors.hpp"

namespace folio::exchange {

namespace {

constexpr std::int64_t kDayMs = 86'400'000;

double number_field(const nlohmann::json& cell, const char* what, const std::string& symbol) {
    try {
        if (cell.is_string()) return std::stod(cell.get<std::string>());
        if (cell.is_number()) return cell.get<double>();
    } catch (const std::exception&) {
    }
    throw DataError("malformed " + std::string(what) + " in klines for " + symbol);
}

std::vector<Bar> parse_page(const std::string& body, const std::string& symbol) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed klines response for " + symbol + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw DataError("malformed klines response for " + symbol + ": not an array");
    }
    std::vector<Bar> bars;
    bars.reserve(doc.size());
    for (const auto& row : doc) {
        if (!row.is_array() || row.size() < 8) {
            throw DataError("malformed kline row for " + symbol);
        }
        Bar bar;
        if (!row[0].is_number_integer()) {
            throw DataError("malformed open time in klines for " + symbol);
        }
        bar.date = Date::from_unix_ms(row[0].get<std::int64_t>());
        bar.open = number_field(row[1], "open", symbol);
        bar.high = number_field(row[2], "high", symbol);
        bar.low = number_field(row[3], "low", symbol);
        bar.close = number_field(row[4], "close", symbol);
        bar.volume = number_field(row[7], "quote volume", symbol);
        validate_bar(bar);
        bars.push_back(bar);
    }
    return bars;
}

bool retryable(int status) {
    return status == 429 || status == 418 || status >= 500 || status == 0;
}

HttpResponse get_with_retries(KlineTransport& transport, const KlineQuery& query,
                              const FetchOptions& options) {
    HttpResponse response;
    for (int attempt = 0;; ++attempt) {
        response = transport.get(query);
        if (response.status == 200) return response;
        if (!retryable(response.status) || attempt >= options.max_retries) break;
        std::this_thread::sleep_for(options.backoff_base * (1LL << attempt));
    }
    if (response.status == 400 && response.body.find("Invalid symbol") != std::string::npos) {
        throw DataError("unknown symbol: " + query.symbol);
    }
    if (response.status == 0) {
        throw DataError("network failure fetching " + query.symbol);
    }
    throw DataError("http error " + std::to_string(response.status) + " fetching " +
                    query.symbol);
}

class HttpTransport : public KlineTransport {
  public:
    explicit HttpTransport(std::string base_url) : client_(std::move(base_url)) {
        client_.set_connection_timeout(10);
        client_.set_read_timeout(30);
    }

    HttpResponse get(const KlineQuery& query) override {
        const std::string path = "/api/v3/klines?symbol=" + query.symbol +
                                 "&interval=" + query.interval +
                                 "&startTime=" + std::to_string(query.start_ms) +
                                 "&endTime=" + std::to_string(query.end_ms) +
                                 "&limit=" + std::to_string(query.limit);
        auto result = client_.Get(path);
        if (!result) return {0, ""};
        return {result->status, result->body};
    }

  private:
    httplib::Client client_;
};

} // namespace

std::unique_ptr<KlineTransport> make_http_transport(const std::string& base_url) {
    return std::make_unique<HttpTransport>(base_url);
}

void FixtureTransport::push_response(int status, std::string body) {
    responses_.push_back({status, std::move(body)});
}

HttpResponse FixtureTransport::get(const KlineQuery& query) {
    requests_.push_back(query);
    if (next_ >= responses_.size()) {
        throw DataError("fixture transport exhausted for " + query.symbol);
    }
    return responses_[next_++];
}

PriceSeries fetch_klines(const FetchRequest& request, KlineTransport& transport,
                         const FetchOptions& options) {
    if (request.start >= request.end) {
        throw DataError("start must precede end");
    }
    if (request.symbol.empty()) {
        throw DataError("empty symbol");
    }
    if (options.page_limit < 1 || options.max_retries < 0) {
        throw DataError("invalid fetch options");
    }

    const std::int64_t end_ms = request.end.unix_ms();
    std::int64_t cursor = request.start.unix_ms();
    PriceSeries series;
    series.symbol = request.symbol;

    while (cursor <= end_ms) {
        KlineQuery query{request.symbol, request.interval, cursor, end_ms, options.page_limit};
        const auto response = get_with_retries(transport, query, options);
        const auto page = parse_page(response.body, request.symbol);
        if (page.empty()) break;
        for (const auto& bar : page) {
            if (!series.bars.empty() && !(series.bars.back().date < bar.date)) {
                throw DataError("overlapping kline pages for " + request.symbol);
            }
            series.bars.push_back(bar);
        }
        if (page.size() < static_cast<std::size_t>(options.page_limit)) break;
        cursor = page.back().date.unix_ms() + kDayMs;
    }

    if (series.bars.empty()) {
        throw DataError("empty response range for " + request.symbol);
    }
    std::filesystem::create_directories(request.out_dir);
    write_csv(series, request.out_dir / (request.symbol + ".csv"));
    return series;
}

} // namespace folio::exchange
