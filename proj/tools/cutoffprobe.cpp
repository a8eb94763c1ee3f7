// cutoffprobe: effective knowledge cutoff probing and corpus version attribution.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cutoffprobe/attribution.hpp"
#include "cutoffprobe/bm25.hpp"
#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/cutoff.hpp"
#include "cutoffprobe/duplicates.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/ngram.hpp"
#include "cutoffprobe/parallel.hpp"
#include "cutoffprobe/score_corpus.hpp"
#include "cutoffprobe/scoring.hpp"
#include "cutoffprobe/synth.hpp"
#include "cutoffprobe/text.hpp"
#include "cutoffprobe/wiki.hpp"
#include "overlay.hpp"

namespace fs = std::filesystem;
using namespace cutoffprobe;
using nlohmann::ordered_json;

namespace {

// Flags that only say where to write or how fast to run; they never change output bytes, so
// they stay out of the echoed config.
const std::set<std::string> kUnechoed = {"config", "jobs", "out", "index-dir", "cache"};

void warn(const std::string& msg) { std::cerr << "cutoffprobe: warning: " << msg << '\n'; }
void note(const std::string& msg) { std::cerr << "cutoffprobe: " << msg << '\n'; }

template <typename T>
CLI::Option* flag(CLI::App* sub, const std::string& name, T& var, const std::string& desc) {
    return sub->add_option("--" + name, var, desc)->envname(cli::env_name(name))->capture_default_str();
}

struct Common {
    std::string config;
    std::size_t jobs = default_jobs();
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON file of flag defaults (flags and environment win)");
    flag(sub, "jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

io::Metadata metadata_for(const CLI::App& sub) {
    io::Metadata meta;
    meta.config = cli::effective_config(sub, kUnechoed);
    meta.config["command"] = sub.get_name();
    return meta;
}

void add_input(io::Metadata& meta, const std::string& role, const fs::path& path) {
    meta.inputs.emplace_back(role, io::file_digest(path));
}

void write_text(const fs::path& path, const io::Metadata& meta, const std::string& body) {
    io::write_file(path, meta.comment_block() + body);
}

void write_json(const fs::path& path, const io::Metadata& meta, ordered_json body) {
    ordered_json out;
    out["meta"] = meta.to_json();
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    io::write_file(path, out.dump(2) + "\n");
}

void write_svg(const fs::path& path, const io::Metadata& meta, const std::string& svg) {
    std::string comment = meta.comment_block();
    for (std::size_t p; (p = comment.find("--")) != std::string::npos;) comment.replace(p, 2, "- -");
    io::write_file(path, "<!--\n" + comment + "-->\n" + svg);
}

MonthStamp parse_month_flag(const std::string& name, const std::string& value) {
    try {
        return MonthStamp::parse(value);
    } catch (const Error& e) {
        throw config_error("--" + name + ": " + e.what());
    }
}

// Month given as YYYY-MM or a 1-based index into the span starting at `start`.
MonthStamp month_ref(const std::string& text, MonthStamp start, std::size_t months, const std::string& flag_name) {
    if (text.find('-') != std::string::npos) return parse_month_flag(flag_name, text);
    std::size_t used = 0;
    long idx = 0;
    try {
        idx = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || idx < 1 || static_cast<std::size_t>(idx) > months) {
        throw config_error("--" + flag_name + ": '" + text + "' is neither YYYY-MM nor a month number in 1.." +
                           std::to_string(months));
    }
    return start.plus(static_cast<int>(idx) - 1);
}

// "6:0.8,18:0.2" style lists.
std::vector<std::pair<std::string, std::string>> pairs_of(const std::string& text, const std::string& flag_name) {
    std::vector<std::pair<std::string, std::string>> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        const auto colon = item.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
            throw config_error("--" + flag_name + ": expected month:value, got '" + item + "'");
        }
        out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
        start = end + 1;
    }
    return out;
}

double number_of(const std::string& text, const std::string& flag_name) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw config_error("--" + flag_name + ": '" + text + "' is not a number");
    return v;
}

// ---- provider specs

struct ProviderHandle {
    std::unique_ptr<Provider> provider;
    std::optional<fs::path> input;
};

ProviderHandle make_provider(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "replay" && !rest.empty()) {
        return {std::make_unique<ReplayProvider>(ReplayProvider::load(rest)), fs::path(rest)};
    }
    if ((kind == "http" || kind == "https") && rest.rfind("//", 0) == 0) {
        return {std::make_unique<HttpProvider>(spec), std::nullopt};  // bare URL
    }
    if (kind == "http" && !rest.empty()) return {std::make_unique<HttpProvider>(rest), std::nullopt};
    if (kind == "countlm") {
        // countlm:<dump-file>:<n>:<alpha>, the path may itself contain ':'
        const auto a = rest.rfind(':');
        const auto n_pos = a == std::string::npos || a == 0 ? std::string::npos : rest.rfind(':', a - 1);
        if (n_pos == std::string::npos) throw config_error("provider '" + spec + "': expected countlm:<dump>:<n>:<alpha>");
        const std::string path = rest.substr(0, n_pos);
        const double n = number_of(rest.substr(n_pos + 1, a - n_pos - 1), "provider");
        const double alpha = number_of(rest.substr(a + 1), "provider");
        if (n != static_cast<int>(n)) throw config_error("provider '" + spec + "': n must be an integer");
        std::vector<std::string> train;
        for (auto& d : load_stream(path)) train.push_back(std::move(d.text));
        return {std::make_unique<CountLm>(CountLm::train(train, static_cast<int>(n), alpha)), fs::path(path)};
    }
    throw config_error("provider '" + spec + "': expected replay:<file>, http:<url> or countlm:<dump>:<n>:<alpha>");
}

// ---- estimate / score share their outputs

struct CurveFlags {
    double trim = kDefaultTrimFrac;
    double epsilon = kDefaultEpsilon;
    bool svg = false;
    std::string title = "relative perplexity";
};

void add_curve_flags(CLI::App* sub, CurveFlags& f) {
    flag(sub, "trim", f.trim, "Fraction trimmed from each end of a month's perplexities");
    flag(sub, "epsilon", f.epsilon, "Relative-perplexity band width around the minimum");
    sub->add_flag("--svg", f.svg, "Also write curve.svg")->envname(cli::env_name("svg"));
    flag(sub, "title", f.title, "SVG title");
}

void write_estimate(const fs::path& out, const io::Metadata& meta, const PerplexitySeries& series,
                    const CurveFlags& f) {
    const auto estimate = estimate_cutoff(relative_curve(series, f.trim), f.epsilon);
    write_text(out / "curve.csv", meta, curve_csv(estimate.curve));
    write_json(out / "estimate.json", meta, estimate_json(estimate));
    if (f.svg) write_svg(out / "curve.svg", meta, curve_svg(estimate, f.title));
    note("argmin " + estimate.argmin_month.str() + ", band of " + std::to_string(estimate.band.size()) + " month(s)");
}

// ---- subcommands

struct FetchArgs {
    Common common;
    std::string titles, first, last, out;
    std::string endpoint{wiki::kDefaultEndpoint};
    int retries = 3;
};

int run_fetch(const CLI::App& sub, const FetchArgs& a) {
    std::vector<std::string> titles;
    for (auto& line : io::read_records(a.titles)) titles.push_back(std::move(line.text));
    wiki::FetchOptions opt;
    opt.endpoint = a.endpoint;
    opt.jobs = a.common.jobs;
    opt.retry.attempts = a.retries;
    opt.warn = warn;
    const auto corpus =
        wiki::fetch_revisions(titles, parse_month_flag("first", a.first), parse_month_flag("last", a.last), opt);
    auto meta = metadata_for(sub);
    add_input(meta, "titles", a.titles);
    write_text(a.out, meta, serialize_timespan(corpus));
    note("kept " + std::to_string(corpus.topic_count()) + " of " + std::to_string(titles.size()) + " titles");
    return 0;
}

struct ScoreArgs {
    Common common;
    std::string corpus, stream, provider, cache, out;
    std::size_t bucket_target = 500;
    std::uint64_t seed = 0;
    std::size_t max_tokens = 512;
    int retries = 3;
    double max_missing = 0.5;
    CurveFlags curve;
};

int run_score(const CLI::App& sub, const ScoreArgs& a) {
    if (a.corpus.empty() == a.stream.empty()) throw config_error("score needs exactly one of --corpus or --stream");
    if (a.bucket_target == 0) throw config_error("--bucket-target must be >= 1");
    auto meta = metadata_for(sub);
    // inputs load before the provider so a bad corpus path is reported as such
    std::optional<TimeSpanCorpus> corpus;
    std::optional<BucketedStream> stream;
    if (!a.corpus.empty()) {
        corpus = load_timespan(a.corpus);
        add_input(meta, "corpus", a.corpus);
    } else {
        stream = bucket_stream(load_stream(a.stream), a.bucket_target, a.seed);
        add_input(meta, "stream", a.stream);
    }
    auto handle = make_provider(a.provider);
    if (handle.input) add_input(meta, "provider", *handle.input);

    std::optional<ScoreCache> cache;
    if (!a.cache.empty()) cache.emplace(a.cache);
    ScoreOptions opt;
    opt.max_tokens = a.max_tokens;
    opt.jobs = a.common.jobs;
    opt.retry.attempts = a.retries;
    opt.max_missing_frac = a.max_missing;
    opt.cache = cache ? &*cache : nullptr;

    const auto report =
        corpus ? score_corpus(*handle.provider, *corpus, opt) : score_corpus(*handle.provider, *stream, opt);
    for (const auto& key : report.missing) warn("no score for " + key);
    note(std::to_string(report.provider_calls) + " provider call(s), " + std::to_string(report.cache_hits) +
         " cache hit(s)");

    const fs::path out(a.out);
    write_text(out / "scores.csv", meta, series_csv(report.series));
    write_estimate(out, meta, report.series, a.curve);
    return 0;
}

struct EstimateArgs {
    Common common;
    std::string scores, out;
    std::vector<std::size_t> sizes;
    std::uint64_t seed = 0;
    CurveFlags curve;
};

int run_estimate(const CLI::App& sub, const EstimateArgs& a) {
    auto meta = metadata_for(sub);
    add_input(meta, "scores", a.scores);
    const auto series = parse_series_csv(io::read_file(a.scores), a.scores);
    const fs::path out(a.out);
    write_estimate(out, meta, series, a.curve);
    if (a.sizes.empty()) return 0;

    std::string csv = "size,month,trimmed_mean_ppl,relative_ppl,n_docs\n";
    ordered_json sizes = ordered_json::array();
    for (const auto& [size, curve] : subsample_curves(series, a.sizes, a.seed, a.curve.trim)) {
        for (std::size_t i = 0; i < curve.months.size(); ++i) {
            csv += std::to_string(size) + "," + curve.months[i].str() + "," + format_float(curve.trimmed_means[i]) +
                   "," + format_float(curve.values[i]) + "," + std::to_string(curve.n_docs[i]) + "\n";
        }
        auto est = estimate_json(estimate_cutoff(curve, a.curve.epsilon));
        ordered_json row;
        row["size"] = size;
        for (auto& [k, v] : est.items()) row[k] = v;
        sizes.push_back(row);
    }
    write_text(out / "ablation.csv", meta, csv);
    write_json(out / "ablation.json", meta, ordered_json{{"sizes", sizes}});
    return 0;
}

struct MineArgs {
    Common common;
    std::string corpus, dump, query_month, index_dir, labels, out;
    std::size_t k = 10;
    double threshold = 0.2;
    std::size_t query_words = 512;
    std::size_t char_cap = kDefaultCharCap;
};

Bm25Index build_or_reuse(const fs::path& dir, const std::vector<StreamDoc>& dump, const std::string& digest,
                         std::size_t jobs) {
    if (fs::exists(dir / "manifest.json")) {
        if (Bm25Index::saved_source_digest(dir) == digest) {
            auto index = Bm25Index::load(dir);
            note("reusing index " + dir.string());
            return index;
        }
        note("index " + dir.string() + " was built from other input, rebuilding");
    }
    std::vector<Bm25Index::Doc> docs;
    docs.reserve(dump.size());
    for (const auto& d : dump) docs.emplace_back(d.doc_id, d.text);
    auto index = Bm25Index::build(docs, {}, jobs);
    index.save(dir, digest);
    note("built index of " + std::to_string(index.doc_count()) + " documents in " + dir.string());
    return index;
}

int run_mine(const CLI::App& sub, const MineArgs& a) {
    auto meta = metadata_for(sub);
    add_input(meta, "corpus", a.corpus);
    add_input(meta, "dump", a.dump);
    if (!a.labels.empty()) add_input(meta, "labels", a.labels);
    meta.config["analyzer"] = std::string(text::kAnalyzerName);
    const auto corpus = load_timespan(a.corpus);
    const auto dump = load_stream(a.dump);
    const fs::path out(a.out);
    const fs::path index_dir = a.index_dir.empty() ? out / "index" : fs::path(a.index_dir);
    const auto index = build_or_reuse(index_dir, dump, meta.inputs[1].second, a.common.jobs);

    DocStore store;
    for (const auto& d : dump) store.add(d.doc_id, d.text);
    AttributionOptions opt;
    opt.k = a.k;
    opt.threshold = a.threshold;
    opt.query_words = a.query_words;
    opt.char_cap = a.char_cap;
    opt.jobs = a.common.jobs;
    const MonthStamp query = a.query_month.empty()
                                 ? corpus.end()
                                 : month_ref(a.query_month, corpus.start(), corpus.month_count(), "query-month");
    const auto result = attribute_versions(index, store, corpus, query, opt);

    write_text(out / "histogram.csv", meta, histogram_csv(result.histogram.counts));
    std::string records;
    for (const auto& r : result.records) records += record_json(r).dump() + "\n";
    write_text(out / "records.jsonl", meta, records);
    const auto dups = duplicate_report(result.records, store, a.threshold, a.char_cap);
    write_json(out / "duplicates.json", meta, report_json(dups));

    if (!a.labels.empty()) {
        const auto labels = synth::parse_labels(io::read_file(a.labels), a.labels);
        const auto m = synth::evaluate_attribution(result.histogram, result.records, labels);
        ordered_json j;
        j["mode_match"] = m.mode_match;
        j["tv_distance"] = m.tv_distance;
        j["accuracy"] = m.accuracy;
        j["accepted"] = m.accepted;
        write_json(out / "metrics.json", meta, j);
    }
    const auto mode = result.histogram.mode();
    note(std::to_string(result.histogram.total_matches) + " accepted match(es)" +
         (mode ? ", mode " + mode->str() : std::string()));
    return 0;
}

struct NgramArgs {
    Common common;
    std::string corpus, dump, out;
    int n = 5;
    std::size_t prefix_words = 512;
};

int run_ngram(const CLI::App& sub, const NgramArgs& a) {
    if (a.n < 1) throw config_error("--n must be >= 1");
    auto meta = metadata_for(sub);
    add_input(meta, "corpus", a.corpus);
    add_input(meta, "dump", a.dump);
    const auto tables = build_ngram_tables(load_timespan(a.corpus), a.n);
    const auto dump = load_stream(a.dump);

    std::vector<std::map<MonthStamp, double>> per_doc(dump.size());
    parallel_for(dump.size(), a.common.jobs,
                 [&](std::size_t i) { per_doc[i] = attribute_ngrams(tables, dump[i].text, a.prefix_words); });
    std::map<MonthStamp, double> total;
    for (const auto& m : tables.per_month) total[m.first] = 0.0;
    for (const auto& credit : per_doc) {
        for (const auto& [m, c] : credit) total[m] += c;
    }
    write_text(fs::path(a.out) / "credit.csv", meta, histogram_csv(total));
    return 0;
}

struct SynthArgs {
    Common common;
    synth::DriftSpec drift;
    std::string start = "2020-01";
    std::string mixture, duplication, out;
    std::size_t dump_docs = 100;
    std::optional<std::uint64_t> dump_seed;
};

int run_synth(const CLI::App& sub, SynthArgs a) {
    a.drift.start = parse_month_flag("start", a.start);
    a.drift.validate();
    const auto corpus = synth::generate_corpus(a.drift);

    synth::DumpSpec dump;
    dump.docs = a.dump_docs;
    dump.seed = a.dump_seed.value_or(a.drift.seed);
    if (a.mixture.empty()) {
        for (const auto& m : corpus.months()) dump.mixture[m] = 1.0 / static_cast<double>(corpus.month_count());
    }
    for (const auto& [m, w] : pairs_of(a.mixture, "mixture")) {
        dump.mixture[month_ref(m, corpus.start(), corpus.month_count(), "mixture")] += number_of(w, "mixture");
    }
    for (const auto& [m, c] : pairs_of(a.duplication, "duplication")) {
        const double copies = number_of(c, "duplication");
        if (copies != static_cast<double>(static_cast<std::size_t>(copies))) {
            throw config_error("--duplication: copies must be a whole number, got " + c);
        }
        dump.duplication[month_ref(m, corpus.start(), corpus.month_count(), "duplication")] =
            static_cast<std::size_t>(copies);
    }
    synth::validate(dump, corpus);
    const auto docs = synth::generate_dump(corpus, dump);

    const auto meta = metadata_for(sub);
    const fs::path out(a.out);
    write_text(out / "corpus.jsonl", meta, serialize_timespan(corpus));
    write_text(out / "dump.jsonl", meta, serialize_stream(synth::to_stream(docs, corpus.end())));
    write_text(out / "labels.jsonl", meta, synth::serialize_labels(docs));
    note("wrote " + std::to_string(corpus.docs().size()) + " versions and " + std::to_string(docs.size()) +
         " dump documents");
    return 0;
}

struct DupsArgs {
    Common common;
    std::string records, dump, out;
    double threshold = 0.2;
    std::size_t char_cap = kDefaultCharCap;
};

int run_dups(const CLI::App& sub, const DupsArgs& a) {
    auto meta = metadata_for(sub);
    add_input(meta, "records", a.records);
    add_input(meta, "dump", a.dump);
    const auto records = parse_records(io::read_file(a.records), a.records);
    DocStore store;
    for (auto& d : load_stream(a.dump)) store.add(std::move(d.doc_id), std::move(d.text));
    const auto report = duplicate_report(records, store, a.threshold, a.char_cap);
    write_json(a.out, meta, report_json(report));
    note(std::to_string(report.exact.size()) + " exact cluster(s), " + std::to_string(report.near.size()) +
         " near pair(s)");
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Probe effective knowledge cutoffs and attribute corpus documents to resource versions."};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    FetchArgs fetch;
    auto* f = app.add_subcommand("fetch-wiki", "Fetch monthly Wikipedia revisions into a versioned corpus");
    add_common(f, fetch.common);
    flag(f, "titles", fetch.titles, "File of page titles, one per line")->required()->check(CLI::ExistingFile);
    flag(f, "first", fetch.first, "First month, YYYY-MM")->required();
    flag(f, "last", fetch.last, "Last month, YYYY-MM")->required();
    flag(f, "endpoint", fetch.endpoint, "MediaWiki Action API endpoint");
    flag(f, "retries", fetch.retries, "Attempts per request")->check(CLI::PositiveNumber);
    flag(f, "out", fetch.out, "Output corpus file")->required();

    ScoreArgs score;
    auto* s = app.add_subcommand("score", "Score every document and estimate the cutoff");
    add_common(s, score.common);
    flag(s, "corpus", score.corpus, "Versioned corpus (topic_id, month, text records)");
    flag(s, "stream", score.stream, "Dated document stream (doc_id, published, text records)");
    flag(s, "bucket-target", score.bucket_target, "Documents kept per month of a stream");
    flag(s, "seed", score.seed, "Stream downsampling seed");
    flag(s, "provider", score.provider, "replay:<file>, http:<url> or countlm:<dump>:<n>:<alpha>")->required();
    flag(s, "max-tokens", score.max_tokens, "Tokens scored per document")->check(CLI::PositiveNumber);
    flag(s, "cache", score.cache, "Score cache file, reused across runs");
    flag(s, "retries", score.retries, "Attempts per document")->check(CLI::PositiveNumber);
    flag(s, "max-missing", score.max_missing, "Largest tolerated fraction of unscored documents per month");
    add_curve_flags(s, score.curve);
    flag(s, "out", score.out, "Output directory")->required();

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "Estimate the cutoff from a scores.csv, optionally per bucket size");
    add_common(e, est.common);
    flag(e, "scores", est.scores, "scores.csv written by score")->required()->check(CLI::ExistingFile);
    flag(e, "sizes", est.sizes, "Per-month subsample sizes, comma separated")->delimiter(',');
    flag(e, "seed", est.seed, "Subsampling seed");
    add_curve_flags(e, est.curve);
    flag(e, "out", est.out, "Output directory")->required();

    MineArgs mine;
    auto* m = app.add_subcommand("mine", "Attribute dump documents to corpus versions by retrieval and edit distance");
    add_common(m, mine.common);
    flag(m, "corpus", mine.corpus, "Versioned corpus")->required();
    flag(m, "dump", mine.dump, "Document stream to search")->required();
    flag(m, "query-month", mine.query_month, "Version used as the query, YYYY-MM or 1-based index (default last)");
    flag(m, "k", mine.k, "Documents retrieved per topic")->check(CLI::PositiveNumber);
    flag(m, "threshold", mine.threshold, "Largest accepted normalized edit distance (exclusive)");
    flag(m, "query-words", mine.query_words, "Words of the query version searched")->check(CLI::PositiveNumber);
    flag(m, "char-cap", mine.char_cap, "Characters compared per document")->check(CLI::PositiveNumber);
    flag(m, "index-dir", mine.index_dir, "Persisted index directory (default <out>/index)");
    flag(m, "labels", mine.labels, "True-month labels, to score the attribution");
    flag(m, "out", mine.out, "Output directory")->required();

    NgramArgs ngram;
    auto* n = app.add_subcommand("ngram-attr", "Attribute dump documents to months by discounted n-gram overlap");
    add_common(n, ngram.common);
    flag(n, "corpus", ngram.corpus, "Versioned corpus")->required();
    flag(n, "dump", ngram.dump, "Document stream")->required();
    flag(n, "n", ngram.n, "Words per n-gram");
    flag(n, "prefix-words", ngram.prefix_words, "Words of each document counted")->check(CLI::PositiveNumber);
    flag(n, "out", ngram.out, "Output directory")->required();

    SynthArgs syn;
    auto* y = app.add_subcommand("synth", "Generate a drifting versioned corpus and a labeled dump");
    add_common(y, syn.common);
    flag(y, "topics", syn.drift.topics, "Topics");
    flag(y, "months", syn.drift.months, "Months");
    flag(y, "tokens-per-doc", syn.drift.tokens_per_doc, "Tokens per version");
    flag(y, "drift", syn.drift.drift_rate, "Fraction of positions redrawn each month");
    flag(y, "vocab", syn.drift.vocab_size, "Vocabulary size");
    flag(y, "seed", syn.drift.seed, "Corpus seed");
    flag(y, "start", syn.start, "First month, YYYY-MM");
    flag(y, "mixture", syn.mixture, "Dump month weights, e.g. 6:0.8,18:0.2 (default uniform)");
    flag(y, "duplication", syn.duplication, "Copies per drawn document by month, e.g. 6:3");
    flag(y, "dump-docs", syn.dump_docs, "Documents drawn into the dump");
    y->add_option("--dump-seed", syn.dump_seed, "Dump seed (default: --seed)")->envname(cli::env_name("dump-seed"));
    flag(y, "out", syn.out, "Output directory")->required();

    DupsArgs dups;
    auto* r = app.add_subcommand("report-dups", "Report exact and near duplicates among accepted matches");
    add_common(r, dups.common);
    flag(r, "records", dups.records, "records.jsonl written by mine")->required();
    flag(r, "dump", dups.dump, "Document stream the records point into")->required();
    flag(r, "threshold", dups.threshold, "Largest near-duplicate distance (exclusive)");
    flag(r, "char-cap", dups.char_cap, "Characters compared per document")->check(CLI::PositiveNumber);
    flag(r, "out", dups.out, "Output JSON file")->required();

    std::vector<std::string> args(argv + 1, argv + argc);
    args = cli::apply_config_overlay(app, std::move(args));
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        std::cerr << "cutoffprobe: error: " << err.what() << '\n';
        return static_cast<int>(ErrorKind::Config);
    }

    if (f->parsed()) return run_fetch(*f, fetch);
    if (s->parsed()) return run_score(*s, score);
    if (e->parsed()) return run_estimate(*e, est);
    if (m->parsed()) return run_mine(*m, mine);
    if (n->parsed()) return run_ngram(*n, ngram);
    if (y->parsed()) return run_synth(*y, syn);
    return run_dups(*r, dups);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "cutoffprobe: error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "cutoffprobe: error: " << e.what() << '\n';
        return 1;
    }
}
