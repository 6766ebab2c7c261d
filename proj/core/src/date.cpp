#include "folio/date.hpp"

#include <charconv>
#include <cstdio>

#include "folio/errors.hpp"

namespace folio {

namespace {

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("bad date component '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
        throw DataError("bad date '" + std::string(iso) + "', expected YYYY-MM-DD");
    }
    int y = parse_int(iso.substr(0, 4));
    int m = parse_int(iso.substr(5, 2));
    int d = parse_int(iso.substr(8, 2));
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
        throw DataError(std::string("invalid calendar date ") + buf);
    }
    return Date(std::chrono::sys_days{ymd});
}

Date Date::from_unix_ms(std::int64_t ms) {
    auto tp = std::chrono::sys_seconds{std::chrono::seconds{ms / 1000}};
    return Date(std::chrono::floor<std::chrono::days>(tp));
}

std::string Date::str() const {
    std::chrono::year_month_day ymd{day_};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::int64_t Date::unix_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(day_.time_since_epoch())
        .count();
}

} // namespace folio
