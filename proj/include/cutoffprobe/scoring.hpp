#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cutoffprobe {

struct TokenScore {
    std::string token_text;
    double logprob;  // natural log
};

struct ScoredDoc {
    std::string doc_key;
    std::vector<TokenScore> scores;
};

struct ScoreRequest {
    std::string_view doc_key;
    std::string_view text;
    std::size_t max_tokens;
};

/// A model behind perplexity measurements. score() is deterministic for a fixed request, returns
/// at most max_tokens scores, and throws Error(Provider) on failure. Implementations must accept
/// concurrent calls unless single_flight() is true.
class Provider {
public:
    virtual ~Provider() = default;
    virtual ScoredDoc score(const ScoreRequest& request) const = 0;
    /// Identity used in score-cache keys; changes whenever outputs could change.
    virtual std::string name() const = 0;
    virtual bool single_flight() const { return false; }
};

/// exp(-mean logprob). Throws Error(Provider) on an empty score list.
double perplexity(const ScoredDoc& doc);

/// Serves recorded scores keyed by doc_key, truncated to max_tokens.
class ReplayProvider final : public Provider {
public:
    static ReplayProvider load(const std::filesystem::path& path);
    static ReplayProvider parse(std::string_view content, std::string_view source = "<memory>");

    ScoredDoc score(const ScoreRequest& request) const override;
    std::string name() const override { return name_; }
    std::size_t size() const noexcept { return docs_.size(); }

private:
    std::string name_;
    std::unordered_map<std::string, ScoredDoc> docs_;
};

/// Client for POST {base}/v1/logprobs.
class HttpProvider final : public Provider {
public:
    explicit HttpProvider(std::string base_url, int timeout_seconds = 120);

    ScoredDoc score(const ScoreRequest& request) const override;
    std::string name() const override { return "http:" + base_url_; }

private:
    std::string base_url_;
    int timeout_seconds_;
};

/// Decodes a /v1/logprobs response body. When logprobs is one shorter than tokens the first
/// token is treated as unscored.
ScoredDoc decode_logprobs_response(std::string_view doc_key, std::string_view body, std::size_t max_tokens);

/// Order-n count model with add-alpha smoothing over lowercase whitespace tokens.
///
/// P(w | h) = (c(h w) + alpha) / (c(h) + alpha V), where h is the previous min(n-1, i) tokens and V
/// counts the training vocabulary plus one unknown-token symbol. Position 0 has no conditioning
/// context and is not scored, so a text of N tokens yields N-1 scores.
class CountLm final : public Provider {
public:
    static CountLm train(const std::vector<std::string>& docs, int order, double alpha);

    ScoredDoc score(const ScoreRequest& request) const override;
    std::string name() const override { return name_; }

    int order() const noexcept { return order_; }
    double alpha() const noexcept { return alpha_; }
    std::size_t vocab_size() const noexcept { return vocab_.size() + 1; }
    /// Conditional log-probability of tokens[pos] given its history within `tokens`.
    double logprob_at(const std::vector<std::string>& tokens, std::size_t pos) const;

private:
    using Id = std::uint32_t;
    std::string key_of(const std::vector<Id>& ids, std::size_t first, std::size_t last) const;
    Id id_of(const std::string& token) const;

    int order_ = 1;
    double alpha_ = 1.0;
    std::string name_;
    std::unordered_map<std::string, Id> vocab_;
    std::unordered_map<std::string, std::uint64_t> ngram_counts_;
    std::unordered_map<std::string, std::uint64_t> context_counts_;
};

}  // namespace cutoffprobe
