#include "cutoffprobe/duplicates.hpp"

#include <algorithm>
#include <map>

#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

std::string excerpt(std::string_view s, std::size_t max_chars) {
    std::size_t chars = 0;
    std::size_t i = 0;
    while (i < s.size() && chars < max_chars) {
        const auto b = static_cast<unsigned char>(s[i]);
        std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 1;
        i = std::min(s.size(), i + len);
        ++chars;
    }
    return std::string(s.substr(0, i));
}

DuplicateReport duplicate_report(std::span<const MatchRecord> records, const DocStore& store, double threshold,
                                 std::size_t char_cap) {
    DuplicateReport report;
    report.threshold = threshold;

    // topic -> text -> doc ids; std::map keeps the output order stable
    std::map<std::string, std::map<std::string, std::vector<std::string>>> by_topic;
    for (const auto& r : records) {
        if (!r.accepted) continue;
        ++report.accepted_matches;
        auto& ids = by_topic[r.topic_id][store.text(r.doc_id)];
        if (std::find(ids.begin(), ids.end(), r.doc_id) == ids.end()) ids.push_back(r.doc_id);
    }

    for (auto& [topic, clusters] : by_topic) {
        struct Rep {
            const std::string* text;
            std::string first_id;
            std::u32string chars;
        };
        std::vector<Rep> reps;
        for (auto& [body, ids] : clusters) {
            std::sort(ids.begin(), ids.end());
            if (ids.size() >= 2) report.exact.push_back({topic, ids, excerpt(body)});
            auto chars = text::decode_utf8(body);
            if (chars.size() > char_cap) chars.resize(char_cap);
            reps.push_back({&body, ids.front(), std::move(chars)});
        }
        for (std::size_t a = 0; a < reps.size(); ++a) {
            for (std::size_t b = a + 1; b < reps.size(); ++b) {
                const auto& x = reps[a].chars.size() >= reps[b].chars.size() ? reps[a] : reps[b];
                const auto& y = &x == &reps[a] ? reps[b] : reps[a];
                if (x.chars.empty()) continue;
                const auto e = normalized_edit_bounded(x.chars, y.chars, threshold);
                if (e.exact && e.value < threshold && e.value > 0.0) {
                    report.near.push_back({topic, reps[a].first_id, reps[b].first_id, e.value,
                                           excerpt(*reps[a].text), excerpt(*reps[b].text)});
                }
            }
        }
    }
    return report;
}

nlohmann::ordered_json report_json(const DuplicateReport& report) {
    nlohmann::ordered_json j;
    j["threshold"] = report.threshold;
    j["accepted_matches"] = report.accepted_matches;
    j["exact_cluster_count"] = report.exact.size();
    j["near_pair_count"] = report.near.size();
    j["exact"] = nlohmann::ordered_json::array();
    for (const auto& c : report.exact) {
        nlohmann::ordered_json e;
        e["topic_id"] = c.topic_id;
        e["size"] = c.doc_ids.size();
        e["doc_ids"] = c.doc_ids;
        e["excerpt"] = c.excerpt;
        j["exact"].push_back(std::move(e));
    }
    j["near"] = nlohmann::ordered_json::array();
    for (const auto& p : report.near) {
        nlohmann::ordered_json e;
        e["topic_id"] = p.topic_id;
        e["doc_a"] = p.doc_a;
        e["doc_b"] = p.doc_b;
        e["distance"] = p.distance;
        e["excerpt_a"] = p.excerpt_a;
        e["excerpt_b"] = p.excerpt_b;
        j["near"].push_back(std::move(e));
    }
    return j;
}

}  // namespace cutoffprobe
