#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cutoffprobe/corpus.hpp"

namespace cutoffprobe {

using NgramCounts = std::unordered_map<std::string, std::uint64_t>;

/// Word n-grams of a token stream, each rendered as its tokens joined by single spaces.
std::vector<std::string> word_ngrams(const std::vector<std::string>& tokens, int n);

/// Per-month n-gram multisets over every topic's version, plus their per-key minimum
/// ("common") across all months. common(g) <= per_month[m](g) for every month m.
struct NgramTables {
    int n = 5;
    std::map<MonthStamp, NgramCounts> per_month;
    NgramCounts common;
};

NgramTables build_ngram_tables(const TimeSpanCorpus& corpus, int n);

/// Discounted overlap credit of the matched text's first prefix_words words: every n-gram
/// occurrence found in month m's table adds per_month[m](g) - common(g) to month m.
/// Every month of the tables appears in the result, zero credit included.
std::map<MonthStamp, double> attribute_ngrams(const NgramTables& tables, std::string_view matched,
                                              std::size_t prefix_words = 512);

}  // namespace cutoffprobe
