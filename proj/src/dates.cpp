#include "courseval/dates.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace courseval {

namespace {

std::chrono::year_month_day to_ymd(std::int32_t days) {
    return std::chrono::year_month_day(
        std::chrono::sys_days(std::chrono::days(days)));
}

bool parse_uint(std::string_view s, unsigned& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date");
    const auto since_epoch = std::chrono::sys_days(ymd).time_since_epoch();
    return Date(static_cast<std::int32_t>(since_epoch.count()));
}

std::optional<Date> Date::parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        return std::nullopt;
    unsigned y = 0, m = 0, d = 0;
    if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), m) ||
        !parse_uint(s.substr(8, 2), d))
        return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                          std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok())
        return std::nullopt;
    const auto since_epoch = std::chrono::sys_days(ymd).time_since_epoch();
    return Date(static_cast<std::int32_t>(since_epoch.count()));
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }

unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }

unsigned Date::day_of_month() const { return static_cast<unsigned>(to_ymd(days_).day()); }

std::string Date::to_string() const {
    const auto ymd = to_ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace courseval
