#include "cutoffprobe/scoring.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

using nlohmann::json;

double perplexity(const ScoredDoc& doc) {
    if (doc.scores.empty()) throw Error(ErrorKind::Provider, "no scored tokens for '" + doc.doc_key + "'");
    double sum = 0.0;
    for (const auto& s : doc.scores) sum += s.logprob;
    return std::exp(-sum / static_cast<double>(doc.scores.size()));
}

namespace {

ScoredDoc decode_scores(std::string_view doc_key, const json& tokens, const json& logprobs, std::size_t max_tokens) {
    if (!tokens.is_array() || !logprobs.is_array()) {
        throw Error(ErrorKind::Provider, "'tokens' and 'logprobs' must be arrays");
    }
    std::size_t offset = 0;
    if (logprobs.size() + 1 == tokens.size()) {
        offset = 1;
    } else if (logprobs.size() != tokens.size()) {
        throw Error(ErrorKind::Provider, "token/logprob length mismatch for '" + std::string(doc_key) + "'");
    }
    ScoredDoc doc{std::string(doc_key), {}};
    for (std::size_t i = 0; i < logprobs.size() && doc.scores.size() < max_tokens; ++i) {
        const json& lp = logprobs[i];
        const json& tok = tokens[i + offset];
        if (!lp.is_number() || !tok.is_string()) {
            throw Error(ErrorKind::Provider, "non-numeric logprob or non-string token for '" + std::string(doc_key) + "'");
        }
        const double v = lp.get<double>();
        if (!std::isfinite(v)) throw Error(ErrorKind::Provider, "non-finite logprob for '" + std::string(doc_key) + "'");
        doc.scores.push_back({tok.get<std::string>(), v});
    }
    return doc;
}

}  // namespace

// ---- replay

ReplayProvider ReplayProvider::parse(std::string_view content, std::string_view source) {
    ReplayProvider p;
    p.name_ = "replay:" + io::sha256_hex(content).substr(0, 16);
    for (const auto& rec : io::split_records(content)) {
        auto where = [&] { return std::string(source) + ":" + std::to_string(rec.number) + ": "; };
        json j = json::parse(rec.text, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("doc_key") || !j["doc_key"].is_string()) {
            throw config_error(where() + "malformed replay record");
        }
        const std::string key = j["doc_key"].get<std::string>();
        ScoredDoc doc;
        try {
            doc = decode_scores(key, j.value("tokens", json()), j.value("logprobs", json()), SIZE_MAX);
        } catch (const Error& e) {
            throw config_error(where() + e.what());
        }
        p.docs_.insert_or_assign(key, std::move(doc));
    }
    return p;
}

ReplayProvider ReplayProvider::load(const std::filesystem::path& path) {
    return parse(io::read_file(path), path.string());
}

ScoredDoc ReplayProvider::score(const ScoreRequest& request) const {
    auto it = docs_.find(std::string(request.doc_key));
    if (it == docs_.end()) {
        throw Error(ErrorKind::Provider, "replay has no record for '" + std::string(request.doc_key) + "'");
    }
    ScoredDoc doc = it->second;
    if (doc.scores.size() > request.max_tokens) doc.scores.resize(request.max_tokens);
    return doc;
}

// ---- http

HttpProvider::HttpProvider(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

ScoredDoc decode_logprobs_response(std::string_view doc_key, std::string_view body, std::size_t max_tokens) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::Provider, "malformed /v1/logprobs response");
    return decode_scores(doc_key, j.value("tokens", json()), j.value("logprobs", json()), max_tokens);
}

ScoredDoc HttpProvider::score(const ScoreRequest& request) const {
    // scheme://host[:port] plus an optional path prefix
    const auto scheme = base_url_.find("://");
    const auto slash = base_url_.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    const std::string host = slash == std::string::npos ? base_url_ : base_url_.substr(0, slash);
    const std::string prefix = slash == std::string::npos ? "" : base_url_.substr(slash);

    httplib::Client client(host);
    client.set_connection_timeout(10);
    client.set_read_timeout(timeout_seconds_);
    json body;
    body["text"] = request.text;
    body["max_tokens"] = request.max_tokens;
    auto res = client.Post(prefix + "/v1/logprobs", body.dump(), "application/json");
    if (!res) {
        throw Error(ErrorKind::Provider, "POST " + base_url_ + "/v1/logprobs failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorKind::Provider, "POST " + base_url_ + "/v1/logprobs returned " + std::to_string(res->status));
    }
    return decode_logprobs_response(request.doc_key, res->body, request.max_tokens);
}

// ---- count LM

CountLm CountLm::train(const std::vector<std::string>& docs, int order, double alpha) {
    if (order < 1) throw config_error("count LM order must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw config_error("count LM alpha must be > 0");
    if (docs.empty()) throw config_error("count LM needs a non-empty training set");

    CountLm lm;
    lm.order_ = order;
    lm.alpha_ = alpha;
    std::string digest_input;
    for (const auto& d : docs) {
        const auto tokens = text::lower_tokens(d);
        std::vector<Id> ids;
        ids.reserve(tokens.size());
        for (const auto& t : tokens) {
            auto [it, _] = lm.vocab_.try_emplace(t, static_cast<Id>(lm.vocab_.size()));
            ids.push_back(it->second);
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const std::size_t max_hist = std::min<std::size_t>(static_cast<std::size_t>(order - 1), i);
            for (std::size_t h = 0; h <= max_hist; ++h) {
                ++lm.ngram_counts_[lm.key_of(ids, i - h, i + 1)];
                ++lm.context_counts_[lm.key_of(ids, i - h, i)];
            }
        }
        digest_input += d;
        digest_input.push_back('\x1e');
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "countlm:n=%d:alpha=%.17g:", order, alpha);
    lm.name_ = buf + io::sha256_hex(digest_input).substr(0, 16);
    return lm;
}

std::string CountLm::key_of(const std::vector<Id>& ids, std::size_t first, std::size_t last) const {
    std::string key;
    key.reserve((last - first) * sizeof(Id));
    for (std::size_t i = first; i < last; ++i) {
        const Id v = ids[i];
        key.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
    return key;
}

CountLm::Id CountLm::id_of(const std::string& token) const {
    auto it = vocab_.find(token);
    return it == vocab_.end() ? static_cast<Id>(vocab_.size()) : it->second;  // unknown symbol
}

double CountLm::logprob_at(const std::vector<std::string>& tokens, std::size_t pos) const {
    const std::size_t hist = std::min<std::size_t>(static_cast<std::size_t>(order_ - 1), pos);
    std::vector<Id> ids;
    for (std::size_t i = pos - hist; i <= pos; ++i) ids.push_back(id_of(tokens[i]));
    auto count = [](const auto& table, const std::string& key) -> double {
        auto it = table.find(key);
        return it == table.end() ? 0.0 : static_cast<double>(it->second);
    };
    const double joint = count(ngram_counts_, key_of(ids, 0, ids.size()));
    const double context = count(context_counts_, key_of(ids, 0, ids.size() - 1));
    const double v = static_cast<double>(vocab_size());
    return std::log((joint + alpha_) / (context + alpha_ * v));
}

ScoredDoc CountLm::score(const ScoreRequest& request) const {
    auto tokens = text::lower_tokens(request.text);
    if (tokens.size() > request.max_tokens) tokens.resize(request.max_tokens);
    ScoredDoc doc{std::string(request.doc_key), {}};
    for (std::size_t i = 1; i < tokens.size(); ++i) doc.scores.push_back({tokens[i], logprob_at(tokens, i)});
    return doc;
}

}  // namespace cutoffprobe
