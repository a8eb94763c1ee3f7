#include "cutoffprobe/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/rng.hpp"

namespace cutoffprobe {

using nlohmann::json;

TimeSpanCorpus TimeSpanCorpus::from_docs(std::vector<VersionedDoc> docs) {
    TimeSpanCorpus c;
    if (docs.empty()) return c;

    std::set<std::string> topic_set;
    MonthStamp lo = docs.front().month;
    MonthStamp hi = lo;
    for (const auto& d : docs) {
        if (d.text.empty()) {
            throw config_error("empty text for topic '" + d.topic_id + "' at " + d.month.str());
        }
        topic_set.insert(d.topic_id);
        lo = std::min(lo, d.month);
        hi = std::max(hi, d.month);
    }
    c.topics_.assign(topic_set.begin(), topic_set.end());
    c.start_ = lo;
    c.month_count_ = static_cast<std::size_t>(span_length(lo, hi));

    std::vector<std::optional<VersionedDoc>> grid(c.topics_.size() * c.month_count_);
    for (auto& d : docs) {
        const std::size_t t = *c.topic_index(d.topic_id);
        const std::size_t m = c.month_index(d.month);
        auto& slot = grid[t * c.month_count_ + m];
        if (slot) {
            throw config_error("duplicate version for topic '" + d.topic_id + "' at " + d.month.str());
        }
        slot = std::move(d);
    }
    c.docs_.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid[i]) {
            throw config_error("grid hole: topic '" + c.topics_[i / c.month_count_] + "' missing month " +
                               lo.plus(static_cast<int>(i % c.month_count_)).str());
        }
        c.docs_.push_back(std::move(*grid[i]));
    }
    return c;
}

std::vector<MonthStamp> TimeSpanCorpus::months() const {
    std::vector<MonthStamp> out;
    out.reserve(month_count_);
    for (std::size_t i = 0; i < month_count_; ++i) out.push_back(start_.plus(static_cast<int>(i)));
    return out;
}

bool TimeSpanCorpus::contains_month(MonthStamp m) const noexcept {
    return month_count_ > 0 && m >= start_ && m <= end();
}

std::optional<std::size_t> TimeSpanCorpus::topic_index(std::string_view topic_id) const {
    auto it = std::lower_bound(topics_.begin(), topics_.end(), topic_id);
    if (it == topics_.end() || *it != topic_id) return std::nullopt;
    return static_cast<std::size_t>(it - topics_.begin());
}

std::size_t TimeSpanCorpus::month_index(MonthStamp m) const {
    if (!contains_month(m)) throw config_error("month " + m.str() + " outside corpus span");
    return static_cast<std::size_t>(start_.months_until(m));
}

const VersionedDoc& TimeSpanCorpus::version(std::string_view topic_id, MonthStamp m) const {
    auto t = topic_index(topic_id);
    if (!t) throw config_error("unknown topic '" + std::string(topic_id) + "'");
    return version(*t, month_index(m));
}

namespace {

[[noreturn]] void bad_record(std::string_view source, std::size_t line, const std::string& why) {
    throw config_error(std::string(source) + ":" + std::to_string(line) + ": " + why);
}

const json& require(const json& obj, const char* key, std::string_view source, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        bad_record(source, line, std::string("missing or non-string field '") + key + "'");
    }
    return *it;
}

}  // namespace

TimeSpanCorpus parse_timespan(std::string_view content, std::string_view source) {
    std::vector<VersionedDoc> docs;
    for (const auto& rec : io::split_records(content)) {
        json j;
        try {
            j = json::parse(rec.text);
        } catch (const json::parse_error& e) {
            bad_record(source, rec.number, e.what());
        }
        if (!j.is_object()) bad_record(source, rec.number, "record is not an object");
        VersionedDoc d;
        d.topic_id = require(j, "topic_id", source, rec.number).get<std::string>();
        try {
            d.month = MonthStamp::parse(require(j, "month", source, rec.number).get<std::string>());
        } catch (const Error& e) {
            bad_record(source, rec.number, e.what());
        }
        d.text = require(j, "text", source, rec.number).get<std::string>();
        if (d.text.empty()) bad_record(source, rec.number, "empty text");
        docs.push_back(std::move(d));
    }
    return TimeSpanCorpus::from_docs(std::move(docs));
}

TimeSpanCorpus load_timespan(const std::filesystem::path& path) {
    return parse_timespan(io::read_file(path), path.string());
}

std::string serialize_timespan(const TimeSpanCorpus& corpus) {
    std::string out;
    for (const auto& d : corpus.docs()) {
        nlohmann::ordered_json j;
        j["topic_id"] = d.topic_id;
        j["month"] = d.month.str();
        j["text"] = d.text;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<StreamDoc> parse_stream(std::string_view content, std::string_view source) {
    std::vector<StreamDoc> docs;
    std::unordered_set<std::string> seen;
    for (const auto& rec : io::split_records(content)) {
        json j;
        try {
            j = json::parse(rec.text);
        } catch (const json::parse_error& e) {
            bad_record(source, rec.number, e.what());
        }
        if (!j.is_object()) bad_record(source, rec.number, "record is not an object");
        StreamDoc d;
        d.doc_id = require(j, "doc_id", source, rec.number).get<std::string>();
        d.published = require(j, "published", source, rec.number).get<std::string>();
        try {
            (void)d.month();
        } catch (const Error& e) {
            bad_record(source, rec.number, e.what());
        }
        d.text = require(j, "text", source, rec.number).get<std::string>();
        if (auto it = j.find("url"); it != j.end() && !it->is_null()) {
            if (!it->is_string()) bad_record(source, rec.number, "field 'url' is not a string");
            d.source_url = it->get<std::string>();
        }
        if (!seen.insert(d.doc_id).second) bad_record(source, rec.number, "duplicate doc_id '" + d.doc_id + "'");
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<StreamDoc> load_stream(const std::filesystem::path& path) {
    return parse_stream(io::read_file(path), path.string());
}

std::string serialize_stream(const std::vector<StreamDoc>& docs) {
    std::string out;
    for (const auto& d : docs) {
        nlohmann::ordered_json j;
        j["doc_id"] = d.doc_id;
        j["published"] = d.published;
        j["text"] = d.text;
        if (d.source_url) j["url"] = *d.source_url;
        out += j.dump();
        out += '\n';
    }
    return out;
}

BucketedStream bucket_stream(std::vector<StreamDoc> docs, std::size_t target, std::uint64_t seed) {
    if (target == 0) throw config_error("bucket target must be >= 1");
    BucketedStream out;
    out.per_bucket_target = target;
    for (auto& d : docs) {
        const MonthStamp m = d.month();
        out.buckets[m].push_back(std::move(d));
    }
    auto by_id = [](const StreamDoc& a, const StreamDoc& b) { return a.doc_id < b.doc_id; };
    for (auto& [month, bucket] : out.buckets) {
        std::sort(bucket.begin(), bucket.end(), by_id);
        if (bucket.size() <= target) continue;
        // Partial Fisher-Yates over the canonical order picks a uniform subset.
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(month.ordinal())}));
        for (std::size_t i = 0; i < target; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(bucket.size() - i));
            std::swap(bucket[i], bucket[j]);
        }
        bucket.resize(target);
        std::sort(bucket.begin(), bucket.end(), by_id);
    }
    return out;
}

}  // namespace cutoffprobe
