#include <gtest/gtest.h>

#include <cmath>

#include "cutoffprobe/attribution.hpp"
#include "cutoffprobe/duplicates.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/ngram.hpp"
#include "cutoffprobe/rng.hpp"
#include "cutoffprobe/synth.hpp"
#include "oracles.hpp"

using namespace cutoffprobe;

namespace {

MonthStamp month(int i) { return MonthStamp::parse("2020-01").plus(i); }

synth::DriftSpec small_spec(std::uint64_t seed = 1) {
    synth::DriftSpec spec;
    spec.topics = 8;
    spec.months = 10;
    spec.tokens_per_doc = 120;
    spec.vocab_size = 800;
    spec.drift_rate = 0.05;
    spec.seed = seed;
    return spec;
}

struct Mined {
    Bm25Index index;
    DocStore store;
};

Mined index_of(const std::vector<Bm25Index::Doc>& docs) {
    return {Bm25Index::build(docs), DocStore(docs)};
}

MatchRecord record_with(std::map<MonthStamp, double> dists, double threshold = 0.2) {
    MatchRecord r;
    r.topic_id = "t";
    r.doc_id = "d";
    r.dists = std::move(dists);
    finalize(r, threshold);
    return r;
}

}  // namespace

TEST(Attribution, ExactCopiesOfOneMonthConcentrateThere) {
    const auto corpus = synth::generate_corpus(small_spec());
    std::vector<Bm25Index::Doc> docs;
    for (std::size_t t = 0; t < corpus.topic_count(); ++t) docs.emplace_back("copy" + std::to_string(t), corpus.version(t, 5).text);
    const auto mined = index_of(docs);
    const auto result = attribute_versions(mined.index, mined.store, corpus, corpus.end());
    ASSERT_GT(result.histogram.total(), 0.0);
    EXPECT_DOUBLE_EQ(result.histogram.counts.at(month(5)), result.histogram.total());
    EXPECT_EQ(result.histogram.mode(), month(5));
    EXPECT_EQ(result.histogram.total_matches, corpus.topic_count());
}

TEST(Attribution, TieSplitsCreditEvenly) {
    const auto r = record_with({{month(2), 0.3}, {month(3), 0.1}, {month(4), 0.1}});
    EXPECT_EQ(r.min_months, (std::vector<MonthStamp>{month(3), month(4)}));
    EXPECT_TRUE(r.accepted);
    const auto h = accumulate_credit(std::span<const MatchRecord>(&r, 1));
    EXPECT_DOUBLE_EQ(h.counts.at(month(3)), 0.5);
    EXPECT_DOUBLE_EQ(h.counts.at(month(4)), 0.5);
    EXPECT_EQ(h.counts.count(month(2)), 0u);
    EXPECT_EQ(h.mode(), month(3));
}

TEST(Attribution, ThresholdIsStrictExceptForIdenticalCopies) {
    EXPECT_TRUE(accepts(0.19, 0.2));
    EXPECT_FALSE(accepts(0.2, 0.2));
    EXPECT_TRUE(accepts(0.0, 0.0));
    EXPECT_FALSE(accepts(0.001, 0.0));
}

TEST(Attribution, UnrelatedDumpGivesEmptyHistogram) {
    const auto corpus = synth::generate_corpus(small_spec());
    std::vector<Bm25Index::Doc> docs;
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        std::string t;
        for (int w = 0; w < 100; ++w) t += synth::vocab_word(5000 + rng.below(1000)) + " ";
        // one shared word so retrieval still returns candidates
        t += corpus.version(static_cast<std::size_t>(i) % corpus.topic_count(), 0).text.substr(0, 20);
        docs.emplace_back("noise" + std::to_string(i), t);
    }
    const auto mined = index_of(docs);
    const auto result = attribute_versions(mined.index, mined.store, corpus, corpus.end());
    EXPECT_FALSE(result.records.empty());
    EXPECT_EQ(result.histogram.total_matches, 0u);
    EXPECT_TRUE(result.histogram.counts.empty());
    EXPECT_FALSE(result.histogram.mode().has_value());
}

TEST(Attribution, QueryMonthOutsideSpanIsConfigError) {
    const auto corpus = synth::generate_corpus(small_spec());
    const auto mined = index_of({{"a", "x"}});
    EXPECT_THROW(attribute_versions(mined.index, mined.store, corpus, month(40)), Error);
}

TEST(Attribution, CreditConservedOverFuzzedRecords) {
    Rng rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<MatchRecord> records;
        std::size_t accepted = 0;
        for (std::size_t i = 0, n = rng.below(30); i < n; ++i) {
            std::map<MonthStamp, double> dists;
            for (int m = 0, months = 1 + static_cast<int>(rng.below(12)); m < months; ++m) {
                dists[month(m)] = static_cast<double>(rng.below(5)) / 10.0;  // coarse grid forces ties
            }
            records.push_back(record_with(dists, 0.25));
            accepted += records.back().accepted;
        }
        const auto h = accumulate_credit(records);
        EXPECT_NEAR(h.total(), static_cast<double>(accepted), 1e-9);
        EXPECT_EQ(h.total_matches, accepted);
    }
}

TEST(Attribution, HistogramCsv) {
    EXPECT_EQ(histogram_csv({{month(0), 1.5}, {month(2), 0.25}}), "month,credit\n2020-01,1.5\n2020-03,0.25\n");
}

TEST(Ngram, TablesMatchBruteCounter) {
    const auto corpus = TimeSpanCorpus::from_docs({
        {"a", month(0), "x y z x y z"}, {"a", month(1), "x y z w"},  {"a", month(2), "q x y z"},
        {"b", month(0), "x y q"},       {"b", month(1), "x y q x y"}, {"b", month(2), "w w w w"},
    });
    const auto tables = build_ngram_tables(corpus, 2);
    const auto brute = oracle::brute_tables(corpus, 2);
    for (const auto& [m, table] : brute) {
        const auto& got = tables.per_month.at(m);
        EXPECT_EQ(got.size(), table.size());
        for (const auto& [g, c] : table) EXPECT_EQ(got.at(g[0] + " " + g[1]), static_cast<std::uint64_t>(c));
    }
    // "x y" appears in every month, "w w" only in month 2
    EXPECT_EQ(tables.common.at("x y"), 1u);
    EXPECT_EQ(tables.common.count("w w"), 0u);
}

TEST(Ngram, GramMissingFromOneMonthIsNotCommon) {
    const auto corpus = TimeSpanCorpus::from_docs(
        {{"a", month(0), "p q r"}, {"a", month(1), "p q r"}, {"a", month(2), "p q s"}});
    const auto tables = build_ngram_tables(corpus, 3);
    EXPECT_TRUE(tables.common.empty());
    const auto credit = attribute_ngrams(tables, "p q r");
    EXPECT_DOUBLE_EQ(credit.at(month(0)), 1.0);
    EXPECT_DOUBLE_EQ(credit.at(month(1)), 1.0);
    EXPECT_DOUBLE_EQ(credit.at(month(2)), 0.0);
}

TEST(Ngram, IdenticalVersionsGiveZeroCredit) {
    std::vector<VersionedDoc> docs;
    for (int m = 0; m < 4; ++m) docs.push_back({"a", month(m), "one two three four five six seven"});
    const auto tables = build_ngram_tables(TimeSpanCorpus::from_docs(docs), 5);
    for (const auto& [m, counts] : tables.per_month) EXPECT_EQ(counts, tables.common);
    for (const auto& [m, c] : attribute_ngrams(tables, "one two three four five six seven")) EXPECT_EQ(c, 0.0);
}

TEST(Ngram, DisjointSupportConcentratesCredit) {
    const auto corpus = synth::generate_corpus(small_spec(2));
    const auto tables = build_ngram_tables(corpus, 5);
    const auto credit = attribute_ngrams(tables, corpus.version(3, 7).text);
    const auto best = std::max_element(credit.begin(), credit.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    EXPECT_EQ(best->first, month(7));
    EXPECT_EQ(credit.size(), corpus.month_count());
}

TEST(Ngram, MatchesAlgorithmOracleOnRandomCorpora) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto spec = small_spec(100 + static_cast<std::uint64_t>(trial));
        spec.topics = 1 + rng.below(3);
        spec.months = 2 + rng.below(4);
        spec.tokens_per_doc = 10 + rng.below(30);
        spec.vocab_size = 5 + rng.below(20);
        spec.drift_rate = 0.3;
        const auto corpus = synth::generate_corpus(spec);
        const int n = 1 + static_cast<int>(rng.below(4));
        const auto tables = build_ngram_tables(corpus, n);
        const auto& src = corpus.docs()[rng.below(corpus.docs().size())].text;
        const std::size_t prefix = 1 + rng.below(40);
        const auto got = attribute_ngrams(tables, src, prefix);
        const auto want = oracle::brute_ngram_credit(corpus, n, src, prefix);
        ASSERT_EQ(got.size(), want.size());
        for (const auto& [m, c] : want) EXPECT_EQ(got.at(m), static_cast<double>(c));
    }
}

TEST(Ngram, CreditIsAdditiveOverDisjointPrefixes) {
    const auto corpus = synth::generate_corpus(small_spec(3));
    const auto tables = build_ngram_tables(corpus, 1);
    const auto a = corpus.version(0, 2).text, b = corpus.version(1, 6).text;
    const auto whole = attribute_ngrams(tables, a + " " + b, 100000);
    const auto x = attribute_ngrams(tables, a, 100000), y = attribute_ngrams(tables, b, 100000);
    for (const auto& [m, c] : whole) EXPECT_DOUBLE_EQ(c, x.at(m) + y.at(m));
}

TEST(Duplicates, TenCopiesFormOneCluster) {
    const std::string text = "The same scraped article, duplicated ten times in the crawl.";
    std::vector<MatchRecord> records;
    DocStore store;
    for (int i = 0; i < 10; ++i) {
        auto r = record_with({{month(0), 0.0}});
        r.doc_id = "dup" + std::to_string(i);
        store.add(r.doc_id, text);
        records.push_back(r);
    }
    const auto report = duplicate_report(records, store);
    ASSERT_EQ(report.exact.size(), 1u);
    EXPECT_EQ(report.exact[0].doc_ids.size(), 10u);
    EXPECT_EQ(report.exact[0].excerpt, text);
    EXPECT_TRUE(report.near.empty());
    EXPECT_EQ(report.accepted_matches, 10u);
}

TEST(Duplicates, ReferenceNumbersOnlyIsNearPair) {
    DocStore store;
    store.add("a", "The Qing dynasty was the last imperial dynasty of China.[1] It was established in 1636.[2] "
                   "Its capital was Beijing.[3]");
    store.add("b", "The Qing dynasty was the last imperial dynasty of China.[4] It was established in 1636.[5] "
                   "Its capital was Beijing.[6]");
    std::vector<MatchRecord> records{record_with({{month(0), 0.05}}), record_with({{month(0), 0.05}})};
    records[0].doc_id = "a";
    records[1].doc_id = "b";
    const auto report = duplicate_report(records, store);
    EXPECT_TRUE(report.exact.empty());
    ASSERT_EQ(report.near.size(), 1u);
    EXPECT_EQ(report.near[0].doc_a, "a");
    EXPECT_EQ(report.near[0].doc_b, "b");
    EXPECT_GT(report.near[0].distance, 0.0);
    EXPECT_LT(report.near[0].distance, 0.2);
}

TEST(Duplicates, AllUniqueIsEmptyAndRejectedIgnored) {
    DocStore store;
    store.add("a", "completely different first text about rivers");
    store.add("b", "nothing in common with anything else at all here");
    store.add("c", "completely different first text about rivers");
    std::vector<MatchRecord> records{record_with({{month(0), 0.1}}), record_with({{month(0), 0.1}}),
                                     record_with({{month(0), 0.9}})};
    records[0].doc_id = "a";
    records[1].doc_id = "b";
    records[2].doc_id = "c";  // rejected, so never pairs with a
    const auto report = duplicate_report(records, store);
    EXPECT_TRUE(report.empty());
    EXPECT_EQ(report.accepted_matches, 2u);
}

TEST(Duplicates, ExcerptNeverSplitsCodePoints) {
    EXPECT_EQ(excerpt("héllo", 2), "hé");
    EXPECT_EQ(excerpt("abc", 10), "abc");
    EXPECT_EQ(excerpt("清朝史", 1), "清");
}

TEST(Attribution, RecordJsonRoundTrips) {
    auto r = record_with({{month(2), 0.3}, {month(3), 0.1}, {month(4), 0.1}});
    r.rank = 4;
    r.bm25_score = 12.625;
    const auto back = parse_record(record_json(r).dump());
    EXPECT_EQ(record_json(back).dump(), record_json(r).dump());
    EXPECT_THROW(parse_record("{\"doc_id\": 1}"), Error);
    EXPECT_EQ(parse_records("# meta\n" + record_json(r).dump() + "\n\n").size(), 1u);
}
