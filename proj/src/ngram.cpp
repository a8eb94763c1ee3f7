#include "cutoffprobe/ngram.hpp"

#include <algorithm>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

std::vector<std::string> word_ngrams(const std::vector<std::string>& tokens, int n) {
    if (n < 1) throw config_error("n-gram order must be >= 1");
    std::vector<std::string> out;
    const auto order = static_cast<std::size_t>(n);
    if (tokens.size() < order) return out;
    out.reserve(tokens.size() - order + 1);
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (std::size_t k = 1; k < order; ++k) {
            g.push_back(' ');
            g += tokens[i + k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

NgramTables build_ngram_tables(const TimeSpanCorpus& corpus, int n) {
    if (n < 1) throw config_error("n-gram order must be >= 1");
    NgramTables tables;
    tables.n = n;
    for (std::size_t m = 0; m < corpus.month_count(); ++m) {
        NgramCounts& counts = tables.per_month[corpus.start().plus(static_cast<int>(m))];
        for (std::size_t t = 0; t < corpus.topic_count(); ++t) {
            for (auto& g : word_ngrams(text::lower_tokens(corpus.version(t, m).text), n)) ++counts[g];
        }
    }
    if (tables.per_month.empty()) return tables;

    // Multiset intersection: walk the smallest table and keep keys present everywhere.
    auto smallest = std::min_element(tables.per_month.begin(), tables.per_month.end(),
                                     [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    for (const auto& [g, c] : smallest->second) {
        std::uint64_t lo = c;
        for (const auto& [m, counts] : tables.per_month) {
            auto it = counts.find(g);
            if (it == counts.end()) {
                lo = 0;
                break;
            }
            lo = std::min(lo, it->second);
        }
        if (lo > 0) tables.common.emplace(g, lo);
    }
    return tables;
}

std::map<MonthStamp, double> attribute_ngrams(const NgramTables& tables, std::string_view matched,
                                              std::size_t prefix_words) {
    std::map<MonthStamp, double> credit;
    for (const auto& [m, _] : tables.per_month) credit[m] = 0.0;
    const auto tokens = text::lower_tokens(text::word_prefix(matched, prefix_words));
    for (const auto& g : word_ngrams(tokens, tables.n)) {
        auto common_it = tables.common.find(g);
        const std::uint64_t common = common_it == tables.common.end() ? 0 : common_it->second;
        for (const auto& [m, counts] : tables.per_month) {
            auto it = counts.find(g);
            if (it != counts.end()) credit[m] += static_cast<double>(it->second - common);
        }
    }
    return credit;
}

}  // namespace cutoffprobe
