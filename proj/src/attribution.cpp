#include "cutoffprobe/attribution.hpp"

#include <algorithm>

#include "cutoffprobe/cutoff.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/parallel.hpp"
#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

DocStore::DocStore(std::span<const Bm25Index::Doc> docs) {
    for (const auto& [id, text] : docs) docs_.insert_or_assign(id, text);
}

const std::string& DocStore::text(const std::string& doc_id) const {
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) throw config_error("no text for document '" + doc_id + "'");
    return it->second;
}

bool accepts(double min_dist, double threshold) { return min_dist < threshold || min_dist == 0.0; }

void finalize(MatchRecord& record, double threshold) {
    record.min_months.clear();
    if (record.dists.empty()) {
        record.accepted = false;
        return;
    }
    record.min_dist = record.dists.begin()->second;
    for (const auto& [m, d] : record.dists) record.min_dist = std::min(record.min_dist, d);
    for (const auto& [m, d] : record.dists) {
        if (d == record.min_dist) record.min_months.push_back(m);
    }
    record.accepted = accepts(record.min_dist, threshold);
}

double VersionHistogram::total() const {
    double sum = 0.0;
    for (const auto& [m, c] : counts) sum += c;
    return sum;
}

std::optional<MonthStamp> VersionHistogram::mode() const {
    std::optional<MonthStamp> best;
    double best_count = 0.0;
    for (const auto& [m, c] : counts) {
        if (c > best_count) {
            best = m;
            best_count = c;
        }
    }
    return best;
}

VersionHistogram accumulate_credit(std::span<const MatchRecord> records) {
    VersionHistogram h;
    for (const auto& r : records) {
        if (!r.accepted || r.min_months.empty()) continue;
        ++h.total_matches;
        const double share = 1.0 / static_cast<double>(r.min_months.size());
        for (const auto& m : r.min_months) h.counts[m] += share;
    }
    return h;
}

AttributionResult attribute_versions(const Bm25Index& index, const DocStore& store, const TimeSpanCorpus& corpus,
                                     MonthStamp query_month, const AttributionOptions& options) {
    if (!corpus.contains_month(query_month)) {
        throw config_error("query month " + query_month.str() + " is outside the corpus span");
    }
    if (options.k == 0) throw config_error("k must be >= 1");
    const std::size_t qm = corpus.month_index(query_month);
    const std::size_t months = corpus.month_count();

    std::vector<std::vector<MatchRecord>> per_topic(corpus.topic_count());
    parallel_for(corpus.topic_count(), options.jobs, [&](std::size_t t) {
        std::vector<std::u32string> versions;
        versions.reserve(months);
        for (std::size_t m = 0; m < months; ++m) {
            auto v = text::decode_utf8(corpus.version(t, m).text);
            if (v.size() > options.char_cap) v.resize(options.char_cap);
            versions.push_back(std::move(v));
        }
        const std::string query = text::word_prefix(corpus.version(t, qm).text, options.query_words);
        const auto hits = index.search(query, options.k);
        for (std::size_t rank = 0; rank < hits.size(); ++rank) {
            MatchRecord rec;
            rec.topic_id = corpus.topics()[t];
            rec.doc_id = hits[rank].doc_id;
            rec.rank = rank;
            rec.bm25_score = hits[rank].score;
            auto matched = text::decode_utf8(store.text(rec.doc_id));
            if (matched.size() > options.char_cap) matched.resize(options.char_cap);
            if (matched.empty()) continue;
            for (std::size_t m = 0; m < months; ++m) {
                rec.dists[corpus.start().plus(static_cast<int>(m))] =
                    normalized_edit_bounded(matched, versions[m], options.threshold).value;
            }
            finalize(rec, options.threshold);
            per_topic[t].push_back(std::move(rec));
        }
    });

    AttributionResult result;
    for (auto& recs : per_topic) {
        for (auto& r : recs) result.records.push_back(std::move(r));
    }
    result.histogram = accumulate_credit(result.records);
    return result;
}

std::string histogram_csv(const std::map<MonthStamp, double>& counts) {
    std::string out = "month,credit\n";
    for (const auto& [m, c] : counts) out += m.str() + "," + format_float(c) + "\n";
    return out;
}

nlohmann::ordered_json record_json(const MatchRecord& r) {
    nlohmann::ordered_json j;
    j["topic_id"] = r.topic_id;
    j["doc_id"] = r.doc_id;
    j["rank"] = r.rank;
    j["bm25_score"] = r.bm25_score;
    j["min_dist"] = r.min_dist;
    j["min_months"] = nlohmann::ordered_json::array();
    for (const auto& m : r.min_months) j["min_months"].push_back(m.str());
    j["accepted"] = r.accepted;
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [m, v] : r.dists) d[m.str()] = v;
    j["dists"] = d;
    return j;
}

MatchRecord parse_record(std::string_view line, std::string_view source) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    try {
        if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("not a JSON object");
        MatchRecord r;
        r.topic_id = j.at("topic_id").get<std::string>();
        r.doc_id = j.at("doc_id").get<std::string>();
        r.rank = j.at("rank").get<std::size_t>();
        r.bm25_score = j.at("bm25_score").get<double>();
        r.min_dist = j.at("min_dist").get<double>();
        for (const auto& m : j.at("min_months")) r.min_months.push_back(MonthStamp::parse(m.get<std::string>()));
        r.accepted = j.at("accepted").get<bool>();
        for (const auto& [m, v] : j.at("dists").items()) r.dists[MonthStamp::parse(m)] = v.get<double>();
        return r;
    } catch (const Error& e) {
        throw config_error(std::string(source) + ": " + e.what());
    } catch (const std::exception& e) {
        throw config_error(std::string(source) + ": malformed match record: " + e.what());
    }
}

std::vector<MatchRecord> parse_records(std::string_view content, std::string_view source) {
    std::vector<MatchRecord> out;
    for (const auto& line : io::split_records(content)) {
        out.push_back(parse_record(line.text, std::string(source) + ":" + std::to_string(line.number)));
    }
    return out;
}

}  // namespace cutoffprobe
