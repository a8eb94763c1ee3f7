#include "cutoffprobe/month.hpp"

#include <charconv>
#include <cstdio>

#include "cutoffprobe/error.hpp"

namespace cutoffprobe {

namespace {

bool parse_fixed(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return kDays[month - 1];
}

}  // namespace

MonthStamp::MonthStamp(int year, int month) : year_(year), month_(month) {
    if (month < 1 || month > 12) {
        throw config_error("month out of range 1..12: " + std::to_string(month));
    }
    if (year < 0 || year > 9999) {
        throw config_error("year out of range: " + std::to_string(year));
    }
}

MonthStamp MonthStamp::parse(std::string_view text) {
    int year = 0;
    int month = 0;
    if (text.size() != 7 || text[4] != '-' || !parse_fixed(text.substr(0, 4), year) ||
        !parse_fixed(text.substr(5, 2), month)) {
        throw config_error("malformed month '" + std::string(text) + "', expected YYYY-MM");
    }
    if (month < 1 || month > 12) {
        throw config_error("month out of range in '" + std::string(text) + "'");
    }
    return MonthStamp(year, month);
}

MonthStamp MonthStamp::from_date(std::string_view date) {
    int day = 0;
    if (date.size() != 10 || date[7] != '-' || !parse_fixed(date.substr(8, 2), day)) {
        throw config_error("malformed date '" + std::string(date) + "', expected YYYY-MM-DD");
    }
    const MonthStamp m = parse(date.substr(0, 7));
    if (day < 1 || day > days_in_month(m.year(), m.month())) {
        throw config_error("day out of range in '" + std::string(date) + "'");
    }
    return m;
}

std::string MonthStamp::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year_, month_);
    return buf;
}

}  // namespace cutoffprobe
