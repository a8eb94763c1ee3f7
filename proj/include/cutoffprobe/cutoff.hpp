#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutoffprobe/month.hpp"

namespace cutoffprobe {

struct Measurement {
    std::string doc_key;
    double perplexity;
};

/// Per-month perplexity measurements for one model. Every month present holds at least one
/// measurement; iteration is chronological.
struct PerplexitySeries {
    std::map<MonthStamp, std::vector<Measurement>> measurements;

    void add(MonthStamp month, std::string doc_key, double perplexity) {
        measurements[month].push_back({std::move(doc_key), perplexity});
    }
    std::vector<MonthStamp> months() const;
    std::size_t month_count() const noexcept { return measurements.size(); }
};

inline constexpr double kDefaultTrimFrac = 0.025;
inline constexpr double kDefaultEpsilon = 0.05;

/// Mean after dropping floor(trim_frac * N) values from each end of the sorted input.
double trimmed_mean(std::span<const double> values, double trim_frac = kDefaultTrimFrac);

/// Min-max scaled trimmed means. values are exactly 0 at the minimum and 1 at the maximum.
struct RelativeCurve {
    std::vector<MonthStamp> months;
    std::vector<double> values;
    std::vector<double> trimmed_means;
    std::vector<double> means;
    std::vector<std::size_t> n_docs;
};

/// Throws Error(Degenerate) with fewer than two months or when every trimmed mean is equal.
RelativeCurve relative_curve(const PerplexitySeries& series, double trim_frac = kDefaultTrimFrac);

struct CutoffEstimate {
    RelativeCurve curve;
    MonthStamp argmin_month;
    std::vector<MonthStamp> band;  // chronological
    double epsilon = kDefaultEpsilon;
};

/// argmin_month is the earliest month at value 0; band is every month with value <= epsilon.
CutoffEstimate estimate_cutoff(RelativeCurve curve, double epsilon = kDefaultEpsilon);

/// One relative curve per requested size, each from its own seeded subsample. When every month
/// holds the same topics (doc keys `<topic>@<month>`), one topic set is drawn and followed
/// across months; otherwise each month is sampled on its own. Sizes at or above a month's count
/// use the whole month.
std::map<std::size_t, RelativeCurve> subsample_curves(const PerplexitySeries& series,
                                                      std::span<const std::size_t> sizes, std::uint64_t seed,
                                                      double trim_frac = kDefaultTrimFrac);

// Output formats.
std::string format_float(double v);  // 6 significant digits
std::string curve_csv(const RelativeCurve& curve);
RelativeCurve parse_curve_csv(std::string_view content);
/// Per-document perplexities: `month,perplexity,doc_key`, lossless doubles, doc_key last so it
/// may contain commas.
std::string series_csv(const PerplexitySeries& series);
PerplexitySeries parse_series_csv(std::string_view content, std::string_view source = "<memory>");
nlohmann::ordered_json estimate_json(const CutoffEstimate& estimate);
/// Polyline of relative perplexity over months with the argmin marked.
std::string curve_svg(const CutoffEstimate& estimate, std::string_view title);

}  // namespace cutoffprobe
