#pragma once

// Independent reference implementations used only by tests. None of these share code paths
// with the library beyond tokenization helpers.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/text.hpp"

namespace oracle {

// Textbook O(nm) Levenshtein table.
inline std::size_t dp_levenshtein(const std::u32string& a, const std::u32string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Okapi BM25 evaluated term by term over the raw documents, summing once per query token.
inline double brute_bm25(const std::vector<std::string>& docs, std::size_t doc, const std::string& query,
                         double k1 = 1.2, double b = 0.75) {
    std::vector<std::vector<std::string>> toks;
    double total = 0;
    for (const auto& d : docs) {
        toks.push_back(cutoffprobe::text::analyze(d));
        total += static_cast<double>(toks.back().size());
    }
    const double n = static_cast<double>(docs.size());
    const double avg = total / n;
    double score = 0;
    for (const auto& q : cutoffprobe::text::analyze(query)) {
        double df = 0;
        for (const auto& t : toks) df += std::find(t.begin(), t.end(), q) != t.end() ? 1 : 0;
        if (df == 0) continue;
        const double idf = std::log(1 + (n - df + 0.5) / (df + 0.5));
        const double tf = static_cast<double>(std::count(toks[doc].begin(), toks[doc].end(), q));
        const double dl = static_cast<double>(toks[doc].size());
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avg));
    }
    return score;
}

inline std::vector<std::vector<std::string>> ngrams_of(const std::string& text, int n) {
    const auto t = cutoffprobe::text::lower_tokens(text);
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= t.size(); ++i) {
        out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(i), t.begin() + static_cast<std::ptrdiff_t>(i) + n);
    }
    return out;
}

using Table = std::map<std::vector<std::string>, long long>;

// Counter over all topics' versions for each month, by direct enumeration.
inline std::map<cutoffprobe::MonthStamp, Table> brute_tables(const cutoffprobe::TimeSpanCorpus& c, int n) {
    std::map<cutoffprobe::MonthStamp, Table> out;
    for (const auto& d : c.docs()) {
        auto& t = out[d.month];
        for (auto& g : ngrams_of(d.text, n)) ++t[g];
    }
    return out;
}

// Appendix-C loop exactly as written: for each n-gram of D[:prefix], for each month whose table
// holds it, add ngrams[m][g] - common[g], where common is the per-key minimum over months.
inline std::map<cutoffprobe::MonthStamp, long long> brute_ngram_credit(const cutoffprobe::TimeSpanCorpus& c, int n,
                                                                        const std::string& matched,
                                                                        std::size_t prefix_words) {
    const auto tables = brute_tables(c, n);
    std::map<cutoffprobe::MonthStamp, long long> counts;
    for (const auto& m : c.months()) counts[m] = 0;
    // prefix by whitespace words
    std::string prefix;
    std::size_t taken = 0;
    for (auto w : cutoffprobe::text::split_whitespace(matched)) {
        if (taken++ == prefix_words) break;
        prefix += std::string(w) + " ";
    }
    for (const auto& g : ngrams_of(prefix, n)) {
        long long common = -1;
        for (const auto& m : c.months()) {
            auto tit = tables.find(m);
            long long v = 0;
            if (tit != tables.end()) {
                auto it = tit->second.find(g);
                if (it != tit->second.end()) v = it->second;
            }
            common = common < 0 ? v : std::min(common, v);
        }
        for (const auto& [m, table] : tables) {
            auto it = table.find(g);
            if (it != table.end()) counts[m] += it->second - common;
        }
    }
    return counts;
}

}  // namespace oracle
