#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "folio/market_data.hpp"

namespace folio::exchange {

/// One-day kline download request; bars covering [start, end] inclusive.
struct FetchRequest {
    std::string symbol;          // exchange pair, e.g. BTCUSDT
    std::string interval = "1d";
    Date start;
    Date end;
    std::filesystem::path out_dir;
};

struct FetchOptions {
    int max_retries = 5;
    std::chrono::milliseconds backoff_base{200};
    int page_limit = 1000;
};

/// Query parameters of one klines GET.
struct KlineQuery {
    std::string symbol;
    std::string interval;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    int limit = 1000;
};

struct HttpResponse {
    int status = 0;  // 0 = transport failure
    std::string body;
};

class KlineTransport {
  public:
    virtual ~KlineTransport() = default;
    virtual HttpResponse get(const KlineQuery& query) = 0;
};

/// Scripted transport for tests and offline runs: replays queued responses
/// in order and records every query it sees.
class FixtureTransport : public KlineTransport {
  public:
    void push_response(int status, std::string body);
    HttpResponse get(const KlineQuery& query) override;
    const std::vector<KlineQuery>& requests() const { return requests_; }

  private:
    std::vector<HttpResponse> responses_;
    std::size_t next_ = 0;
    std::vector<KlineQuery> requests_;
};

/// Live HTTPS transport against the public klines endpoint.
std::unique_ptr<KlineTransport> make_http_transport(
    const std::string& base_url = "https://api.binance.com");

/// Downloads daily bars page by page (<= page_limit bars each), retrying
/// rate-limit and server errors with exponential backoff, then validates the
/// series and persists it as canonical CSV at out_dir/<symbol>.csv.
/// Bar fields: kline open time -> date, OHLC, quote-asset volume -> volume.
PriceSeries fetch_klines(const FetchRequest& request, KlineTransport& transport,
                         const FetchOptions& options = {});

} // namespace folio::exchange
