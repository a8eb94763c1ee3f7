#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace cutoffprobe {

/// A calendar month. Ordered chronologically; renders as zero-padded "YYYY-MM".
class MonthStamp {
public:
    constexpr MonthStamp() = default;
    MonthStamp(int year, int month);

    /// Parses "YYYY-MM". Throws Error(Config) on anything else, including month 13.
    static MonthStamp parse(std::string_view text);
    /// Parses the month of a "YYYY-MM-DD" calendar date; the day is range-checked too.
    static MonthStamp from_date(std::string_view date);
    static constexpr MonthStamp from_ordinal(int ordinal) {
        MonthStamp m;
        m.year_ = ordinal / 12;
        m.month_ = ordinal % 12 + 1;
        return m;
    }

    constexpr int year() const noexcept { return year_; }
    constexpr int month() const noexcept { return month_; }
    /// Months since year 0; differences of ordinals are month gaps.
    constexpr int ordinal() const noexcept { return year_ * 12 + (month_ - 1); }

    constexpr MonthStamp plus(int months) const { return from_ordinal(ordinal() + months); }
    constexpr int months_until(MonthStamp later) const noexcept { return later.ordinal() - ordinal(); }

    std::string str() const;

    constexpr auto operator<=>(const MonthStamp&) const = default;

private:
    int year_ = 1970;
    int month_ = 1;
};

/// Number of months in the inclusive range [first, last]; 0 when last < first.
constexpr int span_length(MonthStamp first, MonthStamp last) noexcept {
    const int n = first.months_until(last) + 1;
    return n > 0 ? n : 0;
}

}  // namespace cutoffprobe

template <>
struct std::hash<cutoffprobe::MonthStamp> {
    std::size_t operator()(const cutoffprobe::MonthStamp& m) const noexcept {
        return std::hash<int>{}(m.ordinal());
    }
};
