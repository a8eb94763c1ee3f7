#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutoffprobe/attribution.hpp"

namespace cutoffprobe {

inline constexpr std::size_t kExcerptChars = 500;

struct ExactCluster {
    std::string topic_id;
    std::vector<std::string> doc_ids;  // sorted
    std::string excerpt;
};

struct NearPair {
    std::string topic_id;
    std::string doc_a;
    std::string doc_b;
    double distance;  // Levenshtein / max(len a, len b)
    std::string excerpt_a;
    std::string excerpt_b;
};

struct DuplicateReport {
    double threshold = 0.2;
    std::size_t accepted_matches = 0;
    std::vector<ExactCluster> exact;
    std::vector<NearPair> near;

    bool empty() const noexcept { return exact.empty() && near.empty(); }
};

/// Groups each topic's accepted matches into byte-identical clusters (size >= 2 reported as
/// exact duplicates), then pairs distinct texts whose mutual normalized edit distance is below
/// threshold as near duplicates.
DuplicateReport duplicate_report(std::span<const MatchRecord> records, const DocStore& store, double threshold = 0.2,
                                 std::size_t char_cap = kDefaultCharCap);

nlohmann::ordered_json report_json(const DuplicateReport& report);

/// First max_chars code points of s, never splitting a UTF-8 sequence.
std::string excerpt(std::string_view s, std::size_t max_chars = kExcerptChars);

}  // namespace cutoffprobe
