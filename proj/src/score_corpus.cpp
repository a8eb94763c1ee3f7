#include "cutoffprobe/score_corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/parallel.hpp"

namespace cutoffprobe {

using nlohmann::json;

ScoreCache::ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
        for (const auto& rec : io::read_records(path_)) {
            json j = json::parse(rec.text, nullptr, false);
            if (j.is_discarded() || !j.is_object()) continue;
            try {
                ScoredDoc doc{j.at("doc_key").get<std::string>(), {}};
                const auto& tokens = j.at("tokens");
                const auto& logprobs = j.at("logprobs");
                if (tokens.size() != logprobs.size()) continue;
                for (std::size_t i = 0; i < tokens.size(); ++i) {
                    doc.scores.push_back({tokens[i].get<std::string>(), logprobs[i].get<double>()});
                }
                const auto k = key(j.at("provider").get<std::string>(), doc.doc_key,
                                   j.at("max_tokens").get<std::size_t>());
                entries_.insert_or_assign(k, std::move(doc));
            } catch (const json::exception&) {
                continue;
            }
        }
    } else if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw io_error("cannot open score cache " + path_.string());
}

std::string ScoreCache::key(const std::string& provider, const std::string& doc_key, std::size_t max_tokens) {
    return provider + '\x1f' + doc_key + '\x1f' + std::to_string(max_tokens);
}

std::optional<ScoredDoc> ScoreCache::lookup(const std::string& provider, const std::string& doc_key,
                                            std::size_t max_tokens) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key(provider, doc_key, max_tokens));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::append(const std::string& provider, std::size_t max_tokens, const ScoredDoc& doc) {
    nlohmann::ordered_json j;
    j["doc_key"] = doc.doc_key;
    j["tokens"] = json::array();
    j["logprobs"] = json::array();
    for (const auto& s : doc.scores) {
        j["tokens"].push_back(s.token_text);
        j["logprobs"].push_back(s.logprob);
    }
    j["provider"] = provider;
    j["max_tokens"] = max_tokens;
    const std::string line = j.dump() + '\n';

    std::lock_guard lock(mu_);
    out_ << line;
    out_.flush();
    if (!out_) throw io_error("write to score cache " + path_.string() + " failed");
    entries_.insert_or_assign(key(provider, doc.doc_key, max_tokens), doc);
}

std::size_t ScoreCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::string version_key(const VersionedDoc& doc) { return doc.topic_id + "@" + doc.month.str(); }

namespace {

struct Item {
    std::string key;
    MonthStamp month;
    const std::string* text;
};

ScoreReport score_items(const Provider& provider, std::vector<Item> items, const ScoreOptions& options) {
    if (options.max_tokens == 0) throw config_error("max_tokens must be >= 1");
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        return a.month != b.month ? a.month < b.month : a.key < b.key;
    });

    const std::string name = provider.name();
    std::vector<std::optional<double>> ppl(items.size());
    std::vector<std::string> failure(items.size());
    std::atomic<std::size_t> calls{0};
    std::atomic<std::size_t> hits{0};
    const std::size_t jobs = provider.single_flight() ? 1 : options.jobs;

    parallel_for(items.size(), jobs, [&](std::size_t i) {
        const Item& item = items[i];
        std::optional<ScoredDoc> doc;
        if (options.cache) doc = options.cache->lookup(name, item.key, options.max_tokens);
        if (doc) {
            ++hits;
        } else {
            try {
                doc = with_retry(options.retry, [&] {
                    ++calls;
                    return provider.score({item.key, *item.text, options.max_tokens});
                });
            } catch (const std::exception& e) {
                failure[i] = e.what();
                return;
            }
            if (options.cache) options.cache->append(name, options.max_tokens, *doc);
        }
        if (doc->scores.empty()) {
            failure[i] = "no scored tokens";
            return;
        }
        ppl[i] = perplexity(*doc);
    });

    ScoreReport report;
    report.provider_calls = calls.load();
    report.cache_hits = hits.load();
    for (std::size_t begin = 0; begin < items.size();) {
        std::size_t end = begin;
        std::size_t lost = 0;
        std::size_t first_failure = items.size();
        while (end < items.size() && items[end].month == items[begin].month) {
            if (!ppl[end]) {
                ++lost;
                if (first_failure == items.size()) first_failure = end;
            }
            ++end;
        }
        const std::size_t total = end - begin;
        if (static_cast<double>(lost) > options.max_missing_frac * static_cast<double>(total)) {
            throw Error(ErrorKind::Provider,
                        "month " + items[begin].month.str() + ": " + std::to_string(lost) + " of " +
                            std::to_string(total) + " documents could not be scored (first: '" +
                            items[first_failure].key + "': " + failure[first_failure] + ")");
        }
        for (std::size_t i = begin; i < end; ++i) {
            if (ppl[i]) {
                report.series.add(items[i].month, items[i].key, *ppl[i]);
            } else {
                report.missing.push_back(items[i].key);
            }
        }
        begin = end;
    }
    std::sort(report.missing.begin(), report.missing.end());
    return report;
}

}  // namespace

ScoreReport score_corpus(const Provider& provider, const TimeSpanCorpus& corpus, const ScoreOptions& options) {
    std::vector<Item> items;
    items.reserve(corpus.docs().size());
    for (const auto& d : corpus.docs()) items.push_back({version_key(d), d.month, &d.text});
    return score_items(provider, std::move(items), options);
}

ScoreReport score_corpus(const Provider& provider, const BucketedStream& stream, const ScoreOptions& options) {
    std::vector<Item> items;
    for (const auto& [month, docs] : stream.buckets) {
        for (const auto& d : docs) items.push_back({d.doc_id, month, &d.text});
    }
    return score_items(provider, std::move(items), options);
}

}  // namespace cutoffprobe
