#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace folio {

/// UTC calendar date at day resolution. Parsed and formatted as ISO-8601
/// (YYYY-MM-DD); arithmetic is in whole days.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days d) : day_(d) {}

    /// Strict YYYY-MM-DD parse; throws DataError on anything else.
    static Date parse(std::string_view iso);
    static Date from_ymd(int year, unsigned month, unsigned day);
    /// Date of a unix millisecond timestamp (UTC).
    static Date from_unix_ms(std::int64_t ms);

    std::string str() const;
    std::int64_t unix_ms() const;
    std::chrono::sys_days raw() const { return day_; }

    Date plus_days(int n) const { return Date(day_ + std::chrono::days{n}); }
    int days_until(Date other) const {
        return static_cast<int>((other.day_ - day_).count());
    }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days day_{};
};

} // namespace folio
