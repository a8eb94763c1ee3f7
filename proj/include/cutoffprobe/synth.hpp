#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cutoffprobe/attribution.hpp"
#include "cutoffprobe/corpus.hpp"

namespace cutoffprobe::synth {

/// Versioned corpus with position-uniform token drift.
struct DriftSpec {
    std::size_t topics = 50;
    std::size_t months = 24;
    std::size_t tokens_per_doc = 400;
    double drift_rate = 0.05;  // fraction of positions resampled per month, in (0, 1]
    std::size_t vocab_size = 5000;
    std::uint64_t seed = 1;
    MonthStamp start{2020, 1};

    void validate() const;
};

/// Deterministic pseudo-word for a vocabulary index; distinct indices give distinct words.
std::string vocab_word(std::size_t index);

/// Month 1 of each topic is a fresh uniform token sequence; every later month copies the previous
/// one and redraws ceil(drift_rate * tokens_per_doc) distinct positions. Each (topic, month) draws
/// from its own substream of the seed, so any subset regenerates identically.
TimeSpanCorpus generate_corpus(const DriftSpec& spec);

struct DumpSpec {
    std::map<MonthStamp, double> mixture;      // sums to 1
    std::size_t docs = 100;                    // draws; copies are extra
    std::map<MonthStamp, std::size_t> duplication;  // copies per drawn doc, default 1
    std::uint64_t seed = 1;
};

struct DumpDoc {
    std::string doc_id;
    std::string topic_id;
    std::string text;
    MonthStamp true_month;
};

/// Throws Error(Config) when the mixture is not a distribution over months in the corpus span.
void validate(const DumpSpec& spec, const TimeSpanCorpus& corpus);

/// Draws spec.docs (topic uniform, month from the mixture) and emits duplication[month] copies of
/// each drawn version.
std::vector<DumpDoc> generate_dump(const TimeSpanCorpus& corpus, const DumpSpec& spec);

/// Dump in the StreamDoc format, published on the first day of the corpus's last month.
std::vector<StreamDoc> to_stream(std::span<const DumpDoc> dump, MonthStamp crawl_month);
std::string serialize_labels(std::span<const DumpDoc> dump);
std::unordered_map<std::string, MonthStamp> parse_labels(std::string_view content, std::string_view source = "<memory>");

struct AttributionMetrics {
    bool mode_match = false;
    double tv_distance = 1.0;
    double accuracy = 0.0;  // mean credit landing on the true month, over accepted labeled matches
    std::size_t accepted = 0;
};

/// Compares credit against the dump's label distribution. Throws Error(Config) on empty labels.
AttributionMetrics evaluate_attribution(const VersionHistogram& histogram, std::span<const MatchRecord> records,
                                        const std::unordered_map<std::string, MonthStamp>& labels);

}  // namespace cutoffprobe::synth
