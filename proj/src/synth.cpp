#include "cutoffprobe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/rng.hpp"

namespace cutoffprobe::synth {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::size_t kSyllables = 14 * 5;

constexpr std::uint64_t kFirstDraftStream = 0;
constexpr std::uint64_t kDumpStream = 0xD0D0;

std::string topic_name(std::size_t t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "topic-%04zu", t + 1);
    return buf;
}

}  // namespace

void DriftSpec::validate() const {
    if (topics == 0 || months == 0 || tokens_per_doc == 0 || vocab_size == 0) {
        throw config_error("drift spec sizes must be positive");
    }
    if (!(drift_rate > 0.0 && drift_rate <= 1.0)) throw config_error("drift rate must lie in (0, 1]");
}

std::string vocab_word(std::size_t index) {
    std::string w;
    std::size_t x = index;
    int digits = 0;
    do {
        const std::size_t s = x % kSyllables;
        w.push_back(kConsonants[s / kVowels.size()]);
        w.push_back(kVowels[s % kVowels.size()]);
        x /= kSyllables;
        ++digits;
    } while (x > 0 || digits < 2);
    return w;
}

TimeSpanCorpus generate_corpus(const DriftSpec& spec) {
    spec.validate();
    const auto changes = static_cast<std::size_t>(
        std::ceil(spec.drift_rate * static_cast<double>(spec.tokens_per_doc) - 1e-9));
    std::vector<std::string> words(spec.vocab_size);
    for (std::size_t i = 0; i < words.size(); ++i) words[i] = vocab_word(i);

    auto render = [&](const std::vector<std::uint32_t>& ids) {
        std::string s;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) s.push_back(' ');
            s += words[ids[i]];
        }
        return s;
    };

    std::vector<VersionedDoc> docs;
    docs.reserve(spec.topics * spec.months);
    std::vector<std::uint32_t> positions(spec.tokens_per_doc);
    for (std::size_t t = 0; t < spec.topics; ++t) {
        const std::string topic = topic_name(t);
        std::vector<std::uint32_t> ids(spec.tokens_per_doc);
        Rng first(derive_seed(spec.seed, {t, kFirstDraftStream}));
        for (auto& id : ids) id = static_cast<std::uint32_t>(first.below(spec.vocab_size));
        docs.push_back({topic, spec.start, render(ids)});
        for (std::size_t m = 1; m < spec.months; ++m) {
            Rng rng(derive_seed(spec.seed, {t, m}));
            std::iota(positions.begin(), positions.end(), 0U);
            for (std::size_t i = 0; i < changes; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(positions.size() - i));
                std::swap(positions[i], positions[j]);
                ids[positions[i]] = static_cast<std::uint32_t>(rng.below(spec.vocab_size));
            }
            docs.push_back({topic, spec.start.plus(static_cast<int>(m)), render(ids)});
        }
    }
    return TimeSpanCorpus::from_docs(std::move(docs));
}

void validate(const DumpSpec& spec, const TimeSpanCorpus& corpus) {
    if (spec.mixture.empty()) throw config_error("dump mixture is empty");
    double sum = 0.0;
    for (const auto& [m, p] : spec.mixture) {
        if (!corpus.contains_month(m)) throw config_error("mixture month " + m.str() + " outside corpus span");
        if (!(p >= 0.0) || !std::isfinite(p)) throw config_error("mixture weight for " + m.str() + " is negative");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw config_error("mixture weights sum to " + std::to_string(sum) + ", not 1");
    for (const auto& [m, copies] : spec.duplication) {
        if (copies < 1) throw config_error("duplication for " + m.str() + " must be >= 1");
    }
    if (corpus.empty()) throw config_error("cannot draw a dump from an empty corpus");
}

std::vector<DumpDoc> generate_dump(const TimeSpanCorpus& corpus, const DumpSpec& spec) {
    validate(spec, corpus);
    Rng rng(derive_seed(spec.seed, {kDumpStream}));
    std::vector<DumpDoc> out;
    for (std::size_t d = 0; d < spec.docs; ++d) {
        const std::size_t topic = static_cast<std::size_t>(rng.below(corpus.topic_count()));
        const double u = rng.unit();
        MonthStamp month = spec.mixture.begin()->first;
        double acc = 0.0;
        for (const auto& [m, p] : spec.mixture) {
            if (p <= 0.0) continue;
            month = m;
            acc += p;
            if (u < acc) break;
        }
        auto dup = spec.duplication.find(month);
        const std::size_t copies = dup == spec.duplication.end() ? 1 : dup->second;
        const auto& version = corpus.version(topic, corpus.month_index(month));
        for (std::size_t c = 0; c < copies; ++c) {
            char id[48];
            std::snprintf(id, sizeof id, "dump-%06zu-%zu", d + 1, c + 1);
            out.push_back({id, version.topic_id, version.text, month});
        }
    }
    return out;
}

std::vector<StreamDoc> to_stream(std::span<const DumpDoc> dump, MonthStamp crawl_month) {
    std::vector<StreamDoc> out;
    out.reserve(dump.size());
    for (const auto& d : dump) out.push_back({d.doc_id, crawl_month.str() + "-01", d.text, std::nullopt});
    return out;
}

std::string serialize_labels(std::span<const DumpDoc> dump) {
    std::string out;
    for (const auto& d : dump) {
        nlohmann::ordered_json j;
        j["doc_id"] = d.doc_id;
        j["true_month"] = d.true_month.str();
        out += j.dump() + '\n';
    }
    return out;
}

std::unordered_map<std::string, MonthStamp> parse_labels(std::string_view content, std::string_view source) {
    std::unordered_map<std::string, MonthStamp> labels;
    for (const auto& rec : io::split_records(content)) {
        auto j = nlohmann::json::parse(rec.text, nullptr, false);
        try {
            if (j.is_discarded()) throw config_error("malformed JSON");
            labels.insert_or_assign(j.at("doc_id").get<std::string>(),
                                    MonthStamp::parse(j.at("true_month").get<std::string>()));
        } catch (const std::exception& e) {
            throw config_error(std::string(source) + ":" + std::to_string(rec.number) + ": " + e.what());
        }
    }
    return labels;
}

AttributionMetrics evaluate_attribution(const VersionHistogram& histogram, std::span<const MatchRecord> records,
                                        const std::unordered_map<std::string, MonthStamp>& labels) {
    if (labels.empty()) throw config_error("no labels to evaluate against");
    std::map<MonthStamp, double> label_dist;
    for (const auto& [id, m] : labels) label_dist[m] += 1.0;
    for (auto& [m, p] : label_dist) p /= static_cast<double>(labels.size());

    AttributionMetrics out;
    const double total = histogram.total();
    if (total > 0.0) {
        double tv = 0.0;
        for (const auto& [m, p] : label_dist) {
            auto it = histogram.counts.find(m);
            tv += std::fabs((it == histogram.counts.end() ? 0.0 : it->second / total) - p);
        }
        for (const auto& [m, c] : histogram.counts) {
            if (!label_dist.contains(m)) tv += c / total;
        }
        out.tv_distance = tv / 2.0;
    }

    std::optional<MonthStamp> label_mode;
    double best = 0.0;
    for (const auto& [m, p] : label_dist) {
        if (p > best) {
            best = p;
            label_mode = m;
        }
    }
    out.mode_match = histogram.mode() == label_mode;

    double correct = 0.0;
    for (const auto& r : records) {
        if (!r.accepted || r.min_months.empty()) continue;
        auto it = labels.find(r.doc_id);
        if (it == labels.end()) continue;
        ++out.accepted;
        if (std::find(r.min_months.begin(), r.min_months.end(), it->second) != r.min_months.end()) {
            correct += 1.0 / static_cast<double>(r.min_months.size());
        }
    }
    out.accuracy = out.accepted ? correct / static_cast<double>(out.accepted) : 0.0;
    return out;
}

}  // namespace cutoffprobe::synth
