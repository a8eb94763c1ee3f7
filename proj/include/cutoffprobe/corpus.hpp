#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cutoffprobe/month.hpp"

namespace cutoffprobe {

struct VersionedDoc {
    std::string topic_id;
    MonthStamp month;
    std::string text;
};

/// Topics x months on a complete grid: every topic has exactly one version per month of the span.
/// Immutable once constructed.
class TimeSpanCorpus {
public:
    TimeSpanCorpus() = default;

    /// Validates and assembles a corpus. The span is [min month, max month] of the input.
    /// Throws Error(Config) on empty text, duplicate (topic, month), or a grid hole.
    static TimeSpanCorpus from_docs(std::vector<VersionedDoc> docs);

    bool empty() const noexcept { return topics_.empty(); }
    /// Topic ids in ascending order.
    const std::vector<std::string>& topics() const noexcept { return topics_; }
    std::size_t topic_count() const noexcept { return topics_.size(); }
    std::size_t month_count() const noexcept { return month_count_; }
    MonthStamp start() const noexcept { return start_; }
    MonthStamp end() const noexcept { return start_.plus(static_cast<int>(month_count_) - 1); }
    std::vector<MonthStamp> months() const;
    bool contains_month(MonthStamp m) const noexcept;

    std::optional<std::size_t> topic_index(std::string_view topic_id) const;
    std::size_t month_index(MonthStamp m) const;  // m must be in span

    const VersionedDoc& version(std::size_t topic, std::size_t month) const {
        return docs_[topic * month_count_ + month];
    }
    const VersionedDoc& version(std::string_view topic_id, MonthStamp m) const;

    /// All versions, topic-major then chronological.
    const std::vector<VersionedDoc>& docs() const noexcept { return docs_; }

private:
    std::vector<std::string> topics_;
    MonthStamp start_;
    std::size_t month_count_ = 0;
    std::vector<VersionedDoc> docs_;
};

/// Reads the one-record-per-line VersionedDoc format. Errors carry the offending line number.
TimeSpanCorpus load_timespan(const std::filesystem::path& path);
TimeSpanCorpus parse_timespan(std::string_view content, std::string_view source = "<memory>");
/// Inverse of parse_timespan: topic-major, chronological, one JSON object per line.
std::string serialize_timespan(const TimeSpanCorpus& corpus);

struct StreamDoc {
    std::string doc_id;
    std::string published;  // YYYY-MM-DD
    std::string text;
    std::optional<std::string> source_url;

    MonthStamp month() const { return MonthStamp::from_date(published); }
};

std::vector<StreamDoc> load_stream(const std::filesystem::path& path);
std::vector<StreamDoc> parse_stream(std::string_view content, std::string_view source = "<memory>");
std::string serialize_stream(const std::vector<StreamDoc>& docs);

struct BucketedStream {
    std::map<MonthStamp, std::vector<StreamDoc>> buckets;  // each bucket sorted by doc_id
    std::size_t per_bucket_target = 0;
};

/// Groups documents by publication month and downsamples buckets above `target` uniformly
/// without replacement. The result does not depend on input order.
BucketedStream bucket_stream(std::vector<StreamDoc> docs, std::size_t target, std::uint64_t seed);

}  // namespace cutoffprobe
