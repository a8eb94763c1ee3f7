#include "cutoffprobe/edit_distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/text.hpp"

namespace cutoffprobe {

namespace {

using Word = std::uint64_t;
constexpr std::size_t kBits = 64;
constexpr Word kHigh = Word{1} << 63;

// Match masks of the pattern, one row of `blocks` words per distinct pattern character plus a
// final all-zero row for characters absent from the pattern.
class PeqTable {
public:
    PeqTable(std::u32string_view pattern, std::size_t blocks) : blocks_(blocks) {
        ascii_.fill(-1);
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            const std::size_t row = row_for_insert(pattern[i]);
            masks_[row * blocks_ + i / kBits] |= Word{1} << (i % kBits);
        }
        absent_ = rows_;
        masks_.resize((rows_ + 1) * blocks_, 0);
    }

    const Word* row(char32_t c) const {
        std::size_t r = absent_;
        if (c < ascii_.size()) {
            if (ascii_[c] >= 0) r = static_cast<std::size_t>(ascii_[c]);
        } else if (auto it = other_.find(c); it != other_.end()) {
            r = it->second;
        }
        return masks_.data() + r * blocks_;
    }

private:
    std::size_t row_for_insert(char32_t c) {
        if (c < ascii_.size()) {
            if (ascii_[c] < 0) ascii_[c] = static_cast<int>(add_row());
            return static_cast<std::size_t>(ascii_[c]);
        }
        auto [it, inserted] = other_.try_emplace(c, 0);
        if (inserted) it->second = add_row();
        return it->second;
    }
    std::size_t add_row() {
        masks_.resize((rows_ + 1) * blocks_, 0);
        return rows_++;
    }

    std::size_t blocks_;
    std::size_t rows_ = 0;
    std::size_t absent_ = 0;
    std::array<int, 128> ascii_{};
    std::unordered_map<char32_t, std::size_t> other_;
    std::vector<Word> masks_;
};

// One column step of a 64-row block. hin is the horizontal delta entering the top row; the
// unshifted horizontal delta vectors are returned so callers can read any row's outgoing delta.
struct Deltas {
    Word ph;
    Word mh;
    int at(Word bit) const { return (ph & bit) ? 1 : ((mh & bit) ? -1 : 0); }
};

inline Deltas advance_block(Word& pv, Word& mv, Word eq, int hin) {
    const Word xv = eq | mv;
    if (hin < 0) eq |= 1;
    const Word xh = (((eq & pv) + pv) ^ pv) | eq;
    const Deltas d{mv | ~(xh | pv), pv & xh};
    Word ph = d.ph << 1;
    Word mh = d.mh << 1;
    if (hin < 0) {
        mh |= 1;
    } else if (hin > 0) {
        ph |= 1;
    }
    pv = mh | ~(xv | ph);
    mv = ph & xv;
    return d;
}

constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

std::optional<std::size_t> run(std::u32string_view a, std::u32string_view b, std::size_t max_distance,
                               std::size_t* lower_bound) {
    // The shorter string is the bit-parallel pattern (rows); the longer is scanned column by column.
    std::u32string_view pattern = a.size() <= b.size() ? a : b;
    std::u32string_view text = a.size() <= b.size() ? b : a;
    const std::size_t m = pattern.size();
    const std::size_t n = text.size();
    auto give_up = [&](std::size_t bound) -> std::optional<std::size_t> {
        if (lower_bound) *lower_bound = bound;
        return std::nullopt;
    };
    if (n - m > max_distance) return give_up(n - m);
    if (m == 0) return n;

    const std::size_t blocks = (m + kBits - 1) / kBits;
    const PeqTable peq(pattern, blocks);
    std::vector<Word> pv(blocks, ~Word{0});
    std::vector<Word> mv(blocks, 0);
    // Bottom-row score of each block; the last block's padded rows extend past m.
    std::vector<long long> bottom(blocks);
    for (std::size_t k = 0; k < blocks; ++k) bottom[k] = static_cast<long long>((k + 1) * kBits);
    const Word last_bit = Word{1} << ((m - 1) % kBits);
    long long score = static_cast<long long>(m);
    const bool bounded = max_distance != kNoLimit;

    for (std::size_t j = 0; j < n; ++j) {
        const Word* eq = peq.row(text[j]);
        int carry = 1;  // top row D[0][j] = j grows by one per column
        for (std::size_t k = 0; k < blocks; ++k) {
            const Deltas d = advance_block(pv[k], mv[k], eq[k], carry);
            // row m sits inside the last block, above any padding rows
            if (k + 1 == blocks) score += d.at(last_bit);
            carry = d.at(kHigh);
            bottom[k] += carry;
        }
        if (!bounded || (j & 15) != 15) continue;
        // Any alignment crosses column j+1 at some row i and still pays |(m - i) - (n - j - 1)|.
        const long long col = static_cast<long long>(j + 1);
        const long long c = static_cast<long long>(m) - static_cast<long long>(n) + col;
        long long lb = col + std::llabs(c);
        for (std::size_t k = 0; k < blocks && lb > static_cast<long long>(max_distance); ++k) {
            const long long lo = static_cast<long long>(k * kBits + 1);
            const long long r = static_cast<long long>((k + 1) * kBits);
            const long long g = lo <= c ? c : 2 * lo - c;
            lb = std::min(lb, bottom[k] - r + g);
        }
        if (lb > static_cast<long long>(max_distance)) return give_up(static_cast<std::size_t>(lb));
    }
    const auto d = static_cast<std::size_t>(score);
    if (d > max_distance) return give_up(d);
    return d;
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) { return *run(a, b, kNoLimit, nullptr); }

std::optional<std::size_t> levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                               std::size_t max_distance, std::size_t* lower_bound) {
    return run(a, b, max_distance, lower_bound);
}

double normalized_edit(std::string_view matched, std::string_view version, std::size_t char_cap) {
    std::u32string a = text::decode_utf8(matched);
    std::u32string b = text::decode_utf8(version);
    if (a.size() > char_cap) a.resize(char_cap);
    if (b.size() > char_cap) b.resize(char_cap);
    if (a.empty()) throw config_error("normalized edit distance of an empty matched document");
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(a.size());
}

NormalizedEdit normalized_edit_bounded(std::u32string_view matched, std::u32string_view version, double threshold) {
    if (matched.empty()) throw config_error("normalized edit distance of an empty matched document");
    const double len = static_cast<double>(matched.size());
    const double limit = std::floor(threshold * len);
    const std::size_t max_distance = limit < 0 ? 0 : static_cast<std::size_t>(limit);
    std::size_t bound = 0;
    if (auto d = levenshtein_bounded(matched, version, max_distance, &bound)) {
        return {static_cast<double>(*d) / len, true};
    }
    return {static_cast<double>(bound) / len, false};
}

}  // namespace cutoffprobe
