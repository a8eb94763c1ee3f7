#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/rng.hpp"
#include "cutoffprobe/text.hpp"

using namespace cutoffprobe;

namespace {

std::string rec(const std::string& topic, const std::string& month, const std::string& text) {
    return R"({"topic_id": ")" + topic + R"(", "month": ")" + month + R"(", "text": ")" + text + "\"}\n";
}

std::string grid(int topics, int months, int skip = -1) {
    std::string s;
    int k = 0;
    for (int t = 0; t < topics; ++t) {
        for (int m = 1; m <= months; ++m, ++k) {
            if (k == skip) continue;
            s += rec("T" + std::to_string(t), "2016-0" + std::to_string(m), "text " + std::to_string(k));
        }
    }
    return s;
}

}  // namespace

TEST(MonthStamp, ParseRenderAndOrder) {
    const auto m = MonthStamp::parse("2016-04");
    EXPECT_EQ(m.year(), 2016);
    EXPECT_EQ(m.month(), 4);
    EXPECT_EQ(m.str(), "2016-04");
    EXPECT_EQ(MonthStamp(987, 1).str(), "0987-01");
    EXPECT_LT(MonthStamp::parse("2016-12"), MonthStamp::parse("2017-01"));
    EXPECT_EQ(MonthStamp::parse("2016-11").plus(3), MonthStamp::parse("2017-02"));
    EXPECT_EQ(MonthStamp::parse("2016-04").months_until(MonthStamp::parse("2023-04")), 84);
    EXPECT_EQ(MonthStamp::parse("2017-02").plus(-3).str(), "2016-11");
}

TEST(MonthStamp, RejectsMalformed) {
    for (const char* bad : {"2016-13", "2016-00", "2016-4", "16-04", "2016/04", "abcd-ef", ""}) {
        EXPECT_THROW(MonthStamp::parse(bad), Error) << bad;
    }
    EXPECT_THROW(MonthStamp::from_date("2019-02-30"), Error);
    EXPECT_EQ(MonthStamp::from_date("2020-02-29").str(), "2020-02");
}

TEST(LoadTimespan, MinimalCompleteGrid) {
    const auto c = parse_timespan(grid(2, 3));
    EXPECT_EQ(c.topic_count(), 2u);
    EXPECT_EQ(c.month_count(), 3u);
    EXPECT_EQ(c.start().str(), "2016-01");
    EXPECT_EQ(c.end().str(), "2016-03");
    EXPECT_EQ(c.version("T1", MonthStamp::parse("2016-02")).text, "text 4");
}

TEST(LoadTimespan, GridHoleNamesTopicAndMonth) {
    try {
        parse_timespan(grid(2, 3, /*skip=*/4));
        FAIL() << "expected grid-hole error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        const std::string what = e.what();
        EXPECT_NE(what.find("T1"), std::string::npos) << what;
        EXPECT_NE(what.find("2016-02"), std::string::npos) << what;
    }
}

TEST(LoadTimespan, MonthOutOfRangeIsParseErrorWithLine) {
    const std::string content = rec("A", "2016-01", "x") + rec("A", "2016-13", "y");
    try {
        parse_timespan(content, "corpus.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("corpus.jsonl:2"), std::string::npos) << e.what();
    }
}

TEST(LoadTimespan, DuplicateAndMalformedRecords) {
    EXPECT_THROW(parse_timespan(rec("A", "2016-01", "x") + rec("A", "2016-01", "y")), Error);
    EXPECT_THROW(parse_timespan("{not json}\n"), Error);
    EXPECT_THROW(parse_timespan(R"({"topic_id": "A", "month": "2016-01"})" "\n"), Error);
    EXPECT_THROW(parse_timespan(rec("A", "2016-01", "")), Error);
}

TEST(LoadTimespan, SkipsMetadataAndBlankLines) {
    const auto c = parse_timespan("# tool: x\n\n" + grid(1, 2));
    EXPECT_EQ(c.month_count(), 2u);
}

TEST(LoadTimespan, MissingFileIsIoError) {
    try {
        load_timespan("/nonexistent/corpus.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/corpus.jsonl"), std::string::npos);
    }
}

TEST(LoadTimespan, RoundTripProperty) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<VersionedDoc> docs;
        const int topics = 1 + static_cast<int>(rng.below(5));
        const int months = 1 + static_cast<int>(rng.below(14));
        const MonthStamp start = MonthStamp(2010 + static_cast<int>(rng.below(10)), 1 + static_cast<int>(rng.below(12)));
        for (int t = 0; t < topics; ++t) {
            for (int m = 0; m < months; ++m) {
                std::string text = "t\"\\\n\té " + std::to_string(rng.below(1000));
                docs.push_back({"topic " + std::to_string(t), start.plus(m), text});
            }
        }
        std::shuffle(docs.begin(), docs.end(), std::mt19937(trial));
        const auto c = TimeSpanCorpus::from_docs(docs);
        const auto text = serialize_timespan(c);
        const auto back = parse_timespan(text);
        EXPECT_EQ(serialize_timespan(back), text);
        ASSERT_EQ(back.docs().size(), c.docs().size());
        for (std::size_t i = 0; i < c.docs().size(); ++i) {
            EXPECT_EQ(back.docs()[i].topic_id, c.docs()[i].topic_id);
            EXPECT_EQ(back.docs()[i].month, c.docs()[i].month);
            EXPECT_EQ(back.docs()[i].text, c.docs()[i].text);
        }
    }
}

TEST(WordPrefix, Examples) {
    EXPECT_EQ(text::word_prefix("a b c", 2), "a b");
    EXPECT_EQ(text::word_prefix("a b c", 10), "a b c");
    EXPECT_EQ(text::word_prefix("a\tb\n\n c  d", 3), "a b c");
    EXPECT_EQ(text::word_prefix("a\xC2\xA0" "b\xE3\x80\x80" "c", 5), "a b c");  // NBSP, ideographic space
    EXPECT_EQ(text::word_prefix("   ", 3), "");
}

TEST(WordPrefix, NeverExceedsN) {
    Rng rng(3);
    const char* pieces[] = {"w", "x", " ", "\t", "\n", "  ", "\xC2\xA0", "\xE2\x80\x83", "é"};
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        for (int k = static_cast<int>(rng.below(40)); k > 0; --k) s += pieces[rng.below(9)];
        const std::size_t n = 1 + rng.below(8);
        EXPECT_LE(text::split_whitespace(text::word_prefix(s, n)).size(), n);
    }
}

TEST(Analyzer, LowercasesAndSplitsOnNonAlnum) {
    EXPECT_EQ(text::analyze("Hello, World! x-y_z 42"),
              (std::vector<std::string>{"hello", "world", "x", "y", "z", "42"}));
    EXPECT_EQ(text::lower_tokens("The  CAT\tsat"), (std::vector<std::string>{"the", "cat", "sat"}));
}

namespace {

std::vector<StreamDoc> stream_docs(int n, const std::string& date) {
    std::vector<StreamDoc> out;
    for (int i = 0; i < n; ++i) out.push_back({"d" + std::to_string(i), date, "text", std::nullopt});
    return out;
}

}  // namespace

TEST(BucketStream, DownsamplesToTargetDeterministically) {
    const auto a = bucket_stream(stream_docs(10, "2019-04-15"), 5, 42);
    const auto b = bucket_stream(stream_docs(10, "2019-04-15"), 5, 42);
    ASSERT_EQ(a.buckets.size(), 1u);
    const auto& bucket = a.buckets.at(MonthStamp::parse("2019-04"));
    EXPECT_EQ(bucket.size(), 5u);
    ASSERT_EQ(b.buckets.at(MonthStamp::parse("2019-04")).size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(bucket[i].doc_id, b.buckets.at(MonthStamp::parse("2019-04"))[i].doc_id);
}

TEST(BucketStream, UnderTargetPassesThrough) {
    std::vector<StreamDoc> docs = {{"a", "2019-01-03", "x", {}}, {"b", "2019-02-03", "y", {}}, {"c", "2019-03-31", "z", {}}};
    const auto out = bucket_stream(docs, 500, 1);
    ASSERT_EQ(out.buckets.size(), 3u);
    for (const auto& [m, bucket] : out.buckets) EXPECT_EQ(bucket.size(), 1u);
    EXPECT_TRUE(bucket_stream({}, 3, 1).buckets.empty());
    EXPECT_THROW(bucket_stream(docs, 0, 1), Error);
}

TEST(BucketStream, PermutationInvariantAndBucketedByMonth) {
    std::vector<StreamDoc> docs;
    for (int i = 0; i < 60; ++i) {
        docs.push_back({"id" + std::to_string(i), "2020-0" + std::to_string(1 + i % 3) + "-1" + std::to_string(i % 9),
                        "t", {}});
    }
    const auto ref = bucket_stream(docs, 7, 99);
    for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = docs;
        std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(trial));
        const auto out = bucket_stream(shuffled, 7, 99);
        ASSERT_EQ(out.buckets.size(), ref.buckets.size());
        for (const auto& [m, bucket] : out.buckets) {
            ASSERT_EQ(bucket.size(), 7u);
            for (std::size_t i = 0; i < bucket.size(); ++i) {
                EXPECT_EQ(bucket[i].doc_id, ref.buckets.at(m)[i].doc_id);
                EXPECT_EQ(bucket[i].month(), m);
            }
        }
    }
}

TEST(StreamFormat, ParseAndRejectDuplicates) {
    const std::string ok =
        R"({"doc_id": "a", "published": "2019-04-02", "text": "hi", "url": "http://x"})" "\n"
        R"({"doc_id": "b", "published": "2019-05-02", "text": "yo"})" "\n";
    const auto docs = parse_stream(ok);
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[0].source_url.value(), "http://x");
    EXPECT_FALSE(docs[1].source_url.has_value());
    EXPECT_EQ(parse_stream(serialize_stream(docs)).size(), 2u);
    EXPECT_THROW(parse_stream(R"({"doc_id": "a", "published": "2019-04-02", "text": "hi"})" "\n"
                              R"({"doc_id": "a", "published": "2019-04-03", "text": "hi"})" "\n"),
                 Error);
    EXPECT_THROW(parse_stream(R"({"doc_id": "a", "published": "2019-04", "text": "hi"})" "\n"), Error);
}
