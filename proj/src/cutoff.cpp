#include "cutoffprobe/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/rng.hpp"

namespace cutoffprobe {

std::vector<MonthStamp> PerplexitySeries::months() const {
    std::vector<MonthStamp> out;
    out.reserve(measurements.size());
    for (const auto& [m, _] : measurements) out.push_back(m);
    return out;
}

double trimmed_mean(std::span<const double> values, double trim_frac) {
    if (values.empty()) throw Error(ErrorKind::Degenerate, "trimmed mean of an empty list");
    if (!(trim_frac >= 0.0 && trim_frac < 0.5)) {
        throw config_error("trim fraction must lie in [0, 0.5)");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto drop = static_cast<std::size_t>(std::floor(trim_frac * static_cast<double>(sorted.size())));
    const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(drop);
    const auto last = sorted.end() - static_cast<std::ptrdiff_t>(drop);
    const double sum = std::accumulate(first, last, 0.0);
    const double mean = sum / static_cast<double>(last - first);
    // Rounding in the sum can push the mean a hair outside the kept range.
    return std::clamp(mean, *first, *(last - 1));
}

namespace {

RelativeCurve scale(RelativeCurve curve) {
    if (curve.months.size() < 2) {
        throw Error(ErrorKind::Degenerate, "relative curve needs at least two months");
    }
    const auto [lo_it, hi_it] = std::minmax_element(curve.trimmed_means.begin(), curve.trimmed_means.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        throw Error(ErrorKind::Degenerate,
                    "degenerate series: every monthly trimmed mean equals " + format_float(lo));
    }
    curve.values.clear();
    for (double x : curve.trimmed_means) curve.values.push_back((x - lo) / (hi - lo));
    return curve;
}

void push_month(RelativeCurve& curve, MonthStamp m, std::span<const double> ppl, double trim_frac) {
    curve.months.push_back(m);
    curve.trimmed_means.push_back(trimmed_mean(ppl, trim_frac));
    std::vector<double> sorted(ppl.begin(), ppl.end());
    std::sort(sorted.begin(), sorted.end());
    curve.means.push_back(std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size()));
    curve.n_docs.push_back(ppl.size());
}

std::vector<double> perplexities(const std::vector<Measurement>& ms) {
    std::vector<double> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.push_back(m.perplexity);
    return out;
}

}  // namespace

RelativeCurve relative_curve(const PerplexitySeries& series, double trim_frac) {
    RelativeCurve curve;
    for (const auto& [m, ms] : series.measurements) {
        if (ms.empty()) continue;
        push_month(curve, m, perplexities(ms), trim_frac);
    }
    return scale(std::move(curve));
}

CutoffEstimate estimate_cutoff(RelativeCurve curve, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw config_error("epsilon must lie in [0, 1)");
    if (curve.months.empty() || curve.months.size() != curve.values.size()) {
        throw Error(ErrorKind::Degenerate, "curve has no months or misaligned values");
    }
    CutoffEstimate est;
    est.epsilon = epsilon;
    const auto min_it = std::min_element(curve.values.begin(), curve.values.end());
    est.argmin_month = curve.months[static_cast<std::size_t>(min_it - curve.values.begin())];
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        if (curve.values[i] <= epsilon) est.band.push_back(curve.months[i]);
    }
    est.curve = std::move(curve);
    return est;
}

std::map<std::size_t, RelativeCurve> subsample_curves(const PerplexitySeries& series,
                                                      std::span<const std::size_t> sizes, std::uint64_t seed,
                                                      double trim_frac) {
    // Per month, measurements keyed by topic (the doc key before its last '@').
    std::map<MonthStamp, std::map<std::string, double>> by_topic;
    bool paired = true;
    for (const auto& [m, ms] : series.measurements) {
        auto& topics = by_topic[m];
        for (const auto& x : ms) {
            const auto at = x.doc_key.rfind('@');
            paired = paired && at != std::string::npos && topics.emplace(x.doc_key.substr(0, at), x.perplexity).second;
        }
    }
    std::vector<std::string> shared;
    if (paired && !by_topic.empty()) {
        for (const auto& [t, _] : by_topic.begin()->second) shared.push_back(t);
        for (const auto& [m, topics] : by_topic) {
            paired = paired && topics.size() == shared.size() &&
                     std::equal(shared.begin(), shared.end(), topics.begin(),
                                [](const std::string& a, const auto& b) { return a == b.first; });
        }
    }

    std::map<std::size_t, RelativeCurve> out;
    for (std::size_t size : sizes) {
        if (size == 0) throw config_error("subsample sizes must be positive");
        if (out.contains(size)) continue;
        RelativeCurve curve;
        if (paired) {
            // Same topics in every month: draw one topic set and follow it across months.
            std::vector<const std::string*> pool;
            for (const auto& t : shared) pool.push_back(&t);
            if (size < pool.size()) {
                Rng rng(derive_seed(seed, {size}));
                for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
                pool.resize(size);
            }
            for (const auto& [m, topics] : by_topic) {
                std::vector<double> ppl;
                for (const auto* t : pool) ppl.push_back(topics.at(*t));
                push_month(curve, m, ppl, trim_frac);
            }
            out.emplace(size, scale(std::move(curve)));
            continue;
        }
        for (const auto& [m, ms] : series.measurements) {
            std::vector<const Measurement*> pool;
            for (const auto& x : ms) pool.push_back(&x);
            std::sort(pool.begin(), pool.end(), [](auto* a, auto* b) {
                return a->doc_key != b->doc_key ? a->doc_key < b->doc_key : a->perplexity < b->perplexity;
            });
            if (size < pool.size()) {
                Rng rng(derive_seed(seed, {size, static_cast<std::uint64_t>(m.ordinal())}));
                for (std::size_t i = 0; i < size; ++i) {
                    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
                }
                pool.resize(size);
            }
            std::vector<double> ppl;
            for (auto* x : pool) ppl.push_back(x->perplexity);
            push_month(curve, m, ppl, trim_frac);
        }
        out.emplace(size, scale(std::move(curve)));
    }
    return out;
}

}  // namespace cutoffprobe
