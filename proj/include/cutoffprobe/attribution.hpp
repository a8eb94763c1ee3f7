#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutoffprobe/bm25.hpp"
#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/edit_distance.hpp"

namespace cutoffprobe {

/// Texts of an indexed corpus, looked up by doc_id.
class DocStore {
public:
    DocStore() = default;
    explicit DocStore(std::span<const Bm25Index::Doc> docs);

    void add(std::string doc_id, std::string text) { docs_.insert_or_assign(std::move(doc_id), std::move(text)); }
    /// Throws Error(Config) for an unknown id.
    const std::string& text(const std::string& doc_id) const;
    std::size_t size() const noexcept { return docs_.size(); }

private:
    std::unordered_map<std::string, std::string> docs_;
};

/// One retrieved document and its normalized edit distance to every version of the topic.
struct MatchRecord {
    std::string topic_id;
    std::string doc_id;
    std::size_t rank = 0;  // 0-based position in the search results
    double bm25_score = 0.0;
    std::map<MonthStamp, double> dists;
    double min_dist = 0.0;
    std::vector<MonthStamp> min_months;  // every month attaining min_dist, chronological
    bool accepted = false;
};

/// Accepts min_dist < threshold; a distance of exactly 0 is always accepted, so threshold 0
/// keeps identical copies only.
bool accepts(double min_dist, double threshold);

/// Fills min_dist, min_months and accepted from dists.
void finalize(MatchRecord& record, double threshold);

struct VersionHistogram {
    std::map<MonthStamp, double> counts;
    std::size_t total_matches = 0;

    double total() const;
    /// Month with the most credit, earliest on ties.
    std::optional<MonthStamp> mode() const;
};

/// Each accepted record adds 1/|min_months| to every month in min_months.
VersionHistogram accumulate_credit(std::span<const MatchRecord> records);

struct AttributionOptions {
    std::size_t k = 10;
    double threshold = 0.2;
    std::size_t query_words = 512;
    std::size_t char_cap = kDefaultCharCap;
    std::size_t jobs = 1;
};

struct AttributionResult {
    VersionHistogram histogram;
    std::vector<MatchRecord> records;  // accepted and rejected, topic order then rank
};

/// For every topic, queries the index with the first query_words words of the topic's version at
/// query_month and credits each accepted hit to its closest version month(s).
AttributionResult attribute_versions(const Bm25Index& index, const DocStore& store, const TimeSpanCorpus& corpus,
                                     MonthStamp query_month, const AttributionOptions& options = {});

std::string histogram_csv(const std::map<MonthStamp, double>& counts);
nlohmann::ordered_json record_json(const MatchRecord& record);
/// Inverse of record_json. Throws Error(Config) on a malformed record.
MatchRecord parse_record(std::string_view line, std::string_view source = "<memory>");
std::vector<MatchRecord> parse_records(std::string_view content, std::string_view source = "<memory>");

}  // namespace cutoffprobe
