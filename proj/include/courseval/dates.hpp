#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace courseval {

/// Calendar date stored as a day count since 1970-01-01 (proleptic Gregorian).
/// All date arithmetic in the library is plain integer day arithmetic; the
/// calendar only matters for parsing, formatting and the quarter-based
/// end-date imputation rule.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days) : days_(days) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Parses strict ISO-8601 "YYYY-MM-DD". Returns nullopt on malformed input.
    static std::optional<Date> parse(std::string_view iso8601);

    constexpr std::int32_t days() const { return days_; }

    int year() const;
    unsigned month() const;        // 1..12
    unsigned day_of_month() const; // 1..31

    std::string to_string() const; // ISO-8601

    constexpr Date plus_days(std::int32_t n) const { return Date(days_ + n); }

    friend constexpr std::int32_t operator-(Date a, Date b) { return a.days_ - b.days_; }
    friend constexpr auto operator<=>(Date, Date) = default;

private:
    std::int32_t days_ = 0;
};

} // namespace courseval
