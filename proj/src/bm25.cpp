#include "cutoffprobe/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <unordered_map>

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"
#include "cutoffprobe/parallel.hpp"
#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

using nlohmann::json;

namespace {

constexpr char kPostingsMagic[8] = {'C', 'P', 'B', 'M', '2', '5', 'P', '1'};

Error format_error(const std::string& msg) { return Error(ErrorKind::IndexFormat, msg); }

}  // namespace

// Owns the posting bytes: either a heap vector (fresh build) or a read-only mapping.
struct Bm25Index::Storage {
    std::vector<Posting> owned;
    void* map_base = nullptr;
    std::size_t map_len = 0;

    Storage() = default;
    Storage(const Storage&) = delete;
    Storage& operator=(const Storage&) = delete;
    ~Storage() {
        if (map_base != nullptr) munmap(map_base, map_len);
    }
};

Bm25Index Bm25Index::build(std::span<const Doc> docs, Bm25Params params, std::size_t jobs) {
    if (docs.empty()) throw config_error("cannot index an empty corpus");
    if (!(params.k1 >= 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
        throw config_error("BM25 parameters out of range (k1 >= 0, 0 <= b <= 1)");
    }

    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return docs[a].first < docs[b].first; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (docs[order[i]].first == docs[order[i - 1]].first) {
            throw config_error("duplicate doc_id '" + docs[order[i]].first + "'");
        }
    }

    Bm25Index index;
    index.params_ = params;
    index.doc_ids_.reserve(docs.size());
    for (std::size_t i : order) index.doc_ids_.push_back(docs[i].first);
    index.doc_lengths_.assign(docs.size(), 0);

    // Shards are contiguous ranges of the sorted doc order, so concatenating shard postings in
    // shard order keeps each list sorted by doc.
    jobs = std::max<std::size_t>(1, std::min(jobs, docs.size()));
    const std::size_t shard_size = (docs.size() + jobs - 1) / jobs;
    const std::size_t shards = (docs.size() + shard_size - 1) / shard_size;
    std::vector<std::map<std::string, std::vector<Posting>>> partial(shards);
    parallel_for(shards, jobs, [&](std::size_t s) {
        const std::size_t lo = s * shard_size;
        const std::size_t hi = std::min(docs.size(), lo + shard_size);
        for (std::size_t d = lo; d < hi; ++d) {
            std::unordered_map<std::string, std::uint32_t> tf;
            const auto tokens = text::analyze(docs[order[d]].second);
            for (const auto& t : tokens) ++tf[t];
            index.doc_lengths_[d] = static_cast<std::uint32_t>(tokens.size());
            for (auto& [term, count] : tf) partial[s][term].push_back({static_cast<std::uint32_t>(d), count});
        }
        for (auto& [term, list] : partial[s]) {
            std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
        }
    });

    std::map<std::string, std::vector<Posting>> merged;
    for (auto& shard : partial) {
        for (auto& [term, list] : shard) {
            auto& dst = merged[term];
            dst.insert(dst.end(), list.begin(), list.end());
        }
    }

    auto storage = std::make_shared<Storage>();
    index.offsets_.push_back(0);
    for (auto& [term, list] : merged) {
        index.terms_.push_back(term);
        storage->owned.insert(storage->owned.end(), list.begin(), list.end());
        index.offsets_.push_back(storage->owned.size());
    }
    index.all_postings_ = storage->owned;
    index.storage_ = std::move(storage);

    double total = 0.0;
    for (auto len : index.doc_lengths_) total += len;
    index.avg_len_ = total / static_cast<double>(index.doc_lengths_.size());
    return index;
}

std::span<const Posting> Bm25Index::postings(std::string_view term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return {};
    const auto t = static_cast<std::size_t>(it - terms_.begin());
    return all_postings_.subspan(offsets_[t], offsets_[t + 1] - offsets_[t]);
}

double Bm25Index::idf(std::string_view term) const {
    const double n = static_cast<double>(doc_count());
    const double df = static_cast<double>(postings(term).size());
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<SearchHit> Bm25Index::search(std::string_view query, std::size_t k) const {
    if (k == 0) return {};
    std::map<std::string, std::uint32_t> query_tf;
    for (auto& t : text::analyze(query)) ++query_tf[t];

    std::vector<double> scores(doc_count(), 0.0);
    std::vector<std::uint32_t> touched;
    const double k1 = params_.k1;
    const double b = params_.b;
    for (const auto& [term, qtf] : query_tf) {
        const auto list = postings(term);
        if (list.empty()) continue;
        const double w = idf(term) * static_cast<double>(qtf);
        for (const Posting& p : list) {
            const double tf = p.tf;
            const double norm = k1 * (1.0 - b + b * static_cast<double>(doc_lengths_[p.doc]) / avg_len_);
            if (scores[p.doc] == 0.0) touched.push_back(p.doc);
            scores[p.doc] += w * tf * (k1 + 1.0) / (tf + norm);
        }
    }
    auto better = [&](std::uint32_t a, std::uint32_t b2) {
        return scores[a] != scores[b2] ? scores[a] > scores[b2] : a < b2;
    };
    const std::size_t take = std::min(k, touched.size());
    std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(take), touched.end(), better);
    std::vector<SearchHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) hits.push_back({doc_ids_[touched[i]], scores[touched[i]]});
    return hits;
}

// ---- persistence

void Bm25Index::save(const std::filesystem::path& dir, std::string_view source_digest) const {
    std::filesystem::create_directories(dir);

    nlohmann::ordered_json manifest;
    manifest["format"] = kIndexFormat;
    manifest["analyzer"] = text::kAnalyzerName;
    manifest["k1"] = params_.k1;
    manifest["b"] = params_.b;
    manifest["doc_count"] = doc_count();
    manifest["avg_len"] = avg_len_;
    manifest["term_count"] = terms_.size();
    manifest["posting_count"] = all_postings_.size();
    manifest["source_digest"] = source_digest;

    io::write_file(dir / "doc_ids.json", json(doc_ids_).dump() + "\n");
    io::write_file(dir / "terms.json", json(terms_).dump() + "\n");
    io::write_file(dir / "lengths.bin",
                   std::string_view(reinterpret_cast<const char*>(doc_lengths_.data()),
                                    doc_lengths_.size() * sizeof(std::uint32_t)));

    std::string blob(kPostingsMagic, sizeof kPostingsMagic);
    const std::uint64_t n_offsets = offsets_.size();
    blob.append(reinterpret_cast<const char*>(&n_offsets), sizeof n_offsets);
    blob.append(reinterpret_cast<const char*>(offsets_.data()), offsets_.size() * sizeof(std::uint64_t));
    blob.append(reinterpret_cast<const char*>(all_postings_.data()), all_postings_.size() * sizeof(Posting));
    io::write_file(dir / "postings.bin", blob);
    // manifest last: its presence marks a complete index
    io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string Bm25Index::saved_source_digest(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    if (!std::filesystem::exists(path)) return {};
    json m = json::parse(io::read_file(path), nullptr, false);
    if (m.is_discarded() || !m.is_object()) return {};
    return m.value("source_digest", std::string{});
}

Bm25Index Bm25Index::load(const std::filesystem::path& dir) {
    json manifest = json::parse(io::read_file(dir / "manifest.json"), nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object()) throw format_error("unreadable index manifest in " + dir.string());
    if (manifest.value("format", std::string{}) != kIndexFormat) {
        throw format_error("index format '" + manifest.value("format", std::string{"?"}) + "' in " + dir.string() +
                           " does not match " + std::string(kIndexFormat));
    }
    if (manifest.value("analyzer", std::string{}) != text::kAnalyzerName) {
        throw format_error("index analyzer mismatch in " + dir.string());
    }

    Bm25Index index;
    try {
        index.params_ = {manifest.at("k1").get<double>(), manifest.at("b").get<double>()};
        index.avg_len_ = manifest.at("avg_len").get<double>();
        index.doc_ids_ = json::parse(io::read_file(dir / "doc_ids.json")).get<std::vector<std::string>>();
        index.terms_ = json::parse(io::read_file(dir / "terms.json")).get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw format_error("corrupt index in " + dir.string() + ": " + e.what());
    }
    const std::string lengths = io::read_file(dir / "lengths.bin");
    if (lengths.size() != index.doc_ids_.size() * sizeof(std::uint32_t)) throw format_error("lengths.bin size mismatch");
    index.doc_lengths_.resize(index.doc_ids_.size());
    std::memcpy(index.doc_lengths_.data(), lengths.data(), lengths.size());

    const auto path = dir / "postings.bin";
    const int fd = ::open(path.c_str(), O_RDONLY);
    if (fd < 0) throw io_error("cannot open " + path.string());
    struct stat st {};
    if (::fstat(fd, &st) != 0) {
        ::close(fd);
        throw io_error("cannot stat " + path.string());
    }
    auto storage = std::make_shared<Storage>();
    storage->map_len = static_cast<std::size_t>(st.st_size);
    if (storage->map_len > 0) {
        void* base = ::mmap(nullptr, storage->map_len, PROT_READ, MAP_PRIVATE, fd, 0);
        if (base == MAP_FAILED) {
            ::close(fd);
            throw io_error("cannot map " + path.string());
        }
        storage->map_base = base;
    }
    ::close(fd);

    const auto* bytes = static_cast<const char*>(storage->map_base);
    const std::size_t len = storage->map_len;
    std::uint64_t n_offsets = 0;
    if (len < sizeof kPostingsMagic + sizeof n_offsets || std::memcmp(bytes, kPostingsMagic, sizeof kPostingsMagic) != 0) {
        throw format_error("postings.bin has a bad header");
    }
    std::memcpy(&n_offsets, bytes + sizeof kPostingsMagic, sizeof n_offsets);
    const std::size_t header = sizeof kPostingsMagic + sizeof n_offsets;
    if (n_offsets != index.terms_.size() + 1 || len < header + n_offsets * sizeof(std::uint64_t)) {
        throw format_error("postings.bin offset table mismatch");
    }
    index.offsets_.resize(n_offsets);
    std::memcpy(index.offsets_.data(), bytes + header, n_offsets * sizeof(std::uint64_t));
    const std::size_t body = header + n_offsets * sizeof(std::uint64_t);
    const std::size_t n_postings = (len - body) / sizeof(Posting);
    if ((len - body) % sizeof(Posting) != 0 || index.offsets_.back() != n_postings) {
        throw format_error("postings.bin body size mismatch");
    }
    // body offset is a multiple of 8, so the mapped postings are suitably aligned
    index.all_postings_ = {reinterpret_cast<const Posting*>(bytes + body), n_postings};
    index.storage_ = std::move(storage);
    return index;
}

}  // namespace cutoffprobe
