#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cutoffprobe/bm25.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/rng.hpp"
#include "oracles.hpp"

using namespace cutoffprobe;
namespace fs = std::filesystem;

namespace {

const char* kWords[] = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "iota", "kappa"};

std::string random_text(Rng& rng, std::size_t max_words) {
    std::string s;
    const std::size_t n = 1 + rng.below(max_words);
    for (std::size_t i = 0; i < n; ++i) {
        s += kWords[rng.below(10)];
        s += rng.below(4) == 0 ? ", " : " ";
    }
    return s;
}

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("cutoffprobe_bm25_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    return p;
}

std::vector<Bm25Index::Doc> named(const std::vector<std::string>& texts) {
    std::vector<Bm25Index::Doc> docs;
    char id[16];
    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::snprintf(id, sizeof id, "d%03zu", i);
        docs.emplace_back(id, texts[i]);
    }
    return docs;
}

}  // namespace

TEST(Bm25, ScoresMatchBruteForce) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> texts;
        for (std::size_t i = 0, n = 1 + rng.below(50); i < n; ++i) texts.push_back(random_text(rng, 30));
        const auto docs = named(texts);
        const auto index = Bm25Index::build(docs, {}, 1 + rng.below(4));
        const std::string query = random_text(rng, 8);
        const auto hits = index.search(query, texts.size());
        for (const auto& hit : hits) {
            const auto i = static_cast<std::size_t>(std::stoul(hit.doc_id.substr(1)));
            const double expect = oracle::brute_bm25(texts, i, query);
            EXPECT_NEAR(hit.score, expect, 1e-9 * std::max(1.0, std::abs(expect)));
        }
        // every document with a positive brute-force score is returned
        std::size_t positive = 0;
        for (std::size_t i = 0; i < texts.size(); ++i) positive += oracle::brute_bm25(texts, i, query) > 0;
        EXPECT_EQ(hits.size(), positive);
    }
}

TEST(Bm25, TermInEveryDocHasSmallPositiveIdf) {
    const auto index = Bm25Index::build(named({"the cat", "the dog", "the end"}));
    EXPECT_NEAR(index.idf("the"), std::log(1 + 0.5 / 3.5), 1e-12);
    EXPECT_GT(index.idf("the"), 0.0);
    EXPECT_EQ(index.postings("the").size(), 3u);
    EXPECT_TRUE(index.postings("missing").empty());
}

TEST(Bm25, IdenticalDocumentRanksFirst) {
    Rng rng(2);
    std::vector<std::string> texts;
    for (int i = 0; i < 20; ++i) texts.push_back(random_text(rng, 40) + " unique" + std::to_string(i));
    const auto index = Bm25Index::build(named(texts));
    for (std::size_t i = 0; i < texts.size(); ++i) {
        EXPECT_EQ(index.search(texts[i], 10).front().doc_id, named(texts)[i].first);
    }
}

TEST(Bm25, KLargerThanCorpusAndNonsenseQueries) {
    const auto index = Bm25Index::build(named({"red fish", "blue fish", "one fish two fish"}));
    EXPECT_EQ(index.search("fish", 100).size(), 3u);
    EXPECT_TRUE(index.search("xyzzy plugh", 10).empty());
    EXPECT_TRUE(index.search("", 10).empty());
    EXPECT_EQ(index.search("fish", 1).size(), 1u);
}

TEST(Bm25, TiesBreakByDocId) {
    std::vector<Bm25Index::Doc> docs{{"z", "same words"}, {"a", "same words"}, {"m", "same words"}};
    const auto hits = Bm25Index::build(docs).search("same", 3);
    ASSERT_EQ(hits.size(), 3u);
    EXPECT_EQ(hits[0].doc_id, "a");
    EXPECT_EQ(hits[1].doc_id, "m");
    EXPECT_EQ(hits[2].doc_id, "z");
}

TEST(Bm25, BuildErrors) {
    EXPECT_THROW(Bm25Index::build(std::vector<Bm25Index::Doc>{}), Error);
    std::vector<Bm25Index::Doc> dup{{"a", "x"}, {"a", "y"}};
    EXPECT_THROW(Bm25Index::build(dup), Error);
}

TEST(Bm25, ParallelBuildMatchesSerial) {
    Rng rng(3);
    std::vector<std::string> texts;
    for (int i = 0; i < 300; ++i) texts.push_back(random_text(rng, 50));
    const auto a = Bm25Index::build(named(texts), {}, 1);
    const auto b = Bm25Index::build(named(texts), {}, 4);
    ASSERT_EQ(a.term_count(), b.term_count());
    for (const char* w : kWords) {
        const auto pa = a.postings(w), pb = b.postings(w);
        ASSERT_EQ(pa.size(), pb.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            EXPECT_EQ(pa[i].doc, pb[i].doc);
            EXPECT_EQ(pa[i].tf, pb[i].tf);
        }
    }
}

TEST(Bm25, SaveLoadRoundTrip) {
    Rng rng(4);
    std::vector<std::string> texts;
    for (int i = 0; i < 40; ++i) texts.push_back(random_text(rng, 30));
    const auto built = Bm25Index::build(named(texts));
    const auto dir = temp_dir("roundtrip");
    built.save(dir, "abc123");
    EXPECT_EQ(Bm25Index::saved_source_digest(dir), "abc123");
    const auto loaded = Bm25Index::load(dir);
    EXPECT_EQ(loaded.doc_ids(), built.doc_ids());
    EXPECT_EQ(loaded.avg_len(), built.avg_len());
    for (int q = 0; q < 20; ++q) {
        const auto query = random_text(rng, 6);
        const auto x = built.search(query, 10), y = loaded.search(query, 10);
        ASSERT_EQ(x.size(), y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            EXPECT_EQ(x[i].doc_id, y[i].doc_id);
            EXPECT_EQ(x[i].score, y[i].score);
        }
    }
    EXPECT_EQ(Bm25Index::saved_source_digest(temp_dir("nothing")), "");
}

TEST(Bm25, LoadRejectsForeignFormat) {
    const auto dir = temp_dir("foreign");
    Bm25Index::build(named({"a b", "b c"})).save(dir, "d");
    {
        std::ofstream(dir / "manifest.json") << R"({"format": "other-index/9", "analyzer": "x"})";
    }
    try {
        Bm25Index::load(dir);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IndexFormat);
    }
    const auto truncated = temp_dir("truncated");
    Bm25Index::build(named({"a b", "b c"})).save(truncated, "d");
    fs::resize_file(truncated / "postings.bin", 4);
    try {
        Bm25Index::load(truncated);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IndexFormat);
    }
}
