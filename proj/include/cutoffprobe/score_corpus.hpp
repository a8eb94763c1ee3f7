#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/cutoff.hpp"
#include "cutoffprobe/retry.hpp"
#include "cutoffprobe/scoring.hpp"

namespace cutoffprobe {

/// Append-only score cache in the replay record format, with "provider" and "max_tokens" added
/// to each record. A torn final line (interrupted run) is ignored on load.
class ScoreCache {
public:
    explicit ScoreCache(std::filesystem::path path);

    std::optional<ScoredDoc> lookup(const std::string& provider, const std::string& doc_key,
                                    std::size_t max_tokens) const;
    void append(const std::string& provider, std::size_t max_tokens, const ScoredDoc& doc);
    std::size_t size() const;

private:
    static std::string key(const std::string& provider, const std::string& doc_key, std::size_t max_tokens);

    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, ScoredDoc> entries_;
    std::ofstream out_;
};

struct ScoreOptions {
    std::size_t max_tokens = 512;
    std::size_t jobs = 8;
    RetryPolicy retry;
    double max_missing_frac = 0.5;
    ScoreCache* cache = nullptr;
};

struct ScoreReport {
    PerplexitySeries series;
    std::vector<std::string> missing;  // doc keys, sorted
    std::size_t provider_calls = 0;
    std::size_t cache_hits = 0;
};

/// doc_key used for a versioned document: "<topic>@YYYY-MM".
std::string version_key(const VersionedDoc& doc);

/// One perplexity per document, grouped by month. Documents whose scoring fails after retries are
/// listed as missing; if any month loses more than max_missing_frac of its documents the run
/// aborts with Error(Provider) naming the earliest such month.
ScoreReport score_corpus(const Provider& provider, const TimeSpanCorpus& corpus, const ScoreOptions& options);
ScoreReport score_corpus(const Provider& provider, const BucketedStream& stream, const ScoreOptions& options);

}  // namespace cutoffprobe
