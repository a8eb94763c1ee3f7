#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cutoffprobe {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t doc;  // index into doc_ids(), which is sorted ascending
    std::uint32_t tf;
};

struct SearchHit {
    std::string doc_id;
    double score;
};

inline constexpr std::string_view kIndexFormat = "cutoffprobe-bm25/1";

/// Okapi BM25 inverted index with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
/// Immutable after build/load; concurrent searches are safe.
class Bm25Index {
public:
    using Doc = std::pair<std::string, std::string>;  // (doc_id, text)

    /// Throws Error(Config) on an empty corpus or duplicate doc_id.
    static Bm25Index build(std::span<const Doc> docs, Bm25Params params = {}, std::size_t jobs = 1);

    /// Writes manifest.json, doc_ids.json, lengths.bin, terms.json and postings.bin into `dir`.
    void save(const std::filesystem::path& dir, std::string_view source_digest) const;
    /// Maps postings.bin read-only. Throws Error(IndexFormat) when the manifest format tag,
    /// analyzer, or file layout does not match this build.
    static Bm25Index load(const std::filesystem::path& dir);
    /// source_digest recorded in a saved index's manifest, or empty if there is none.
    static std::string saved_source_digest(const std::filesystem::path& dir);

    /// Top-k by descending score, ties by ascending doc_id. Documents sharing no term with the
    /// query are never returned.
    std::vector<SearchHit> search(std::string_view query, std::size_t k = 10) const;

    std::size_t doc_count() const noexcept { return doc_ids_.size(); }
    double avg_len() const noexcept { return avg_len_; }
    const Bm25Params& params() const noexcept { return params_; }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    std::uint32_t doc_length(std::size_t doc) const { return doc_lengths_[doc]; }
    std::span<const Posting> postings(std::string_view term) const;
    std::size_t term_count() const noexcept { return terms_.size(); }
    double idf(std::string_view term) const;

private:
    struct Storage;

    Bm25Params params_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_len_ = 0.0;
    std::vector<std::string> terms_;  // sorted
    std::vector<std::uint64_t> offsets_;
    std::shared_ptr<const Storage> storage_;
    std::span<const Posting> all_postings_;
};

}  // namespace cutoffprobe
